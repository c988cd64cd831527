use std::fs;
use std::io::Write;
use std::path::Path;

use super::CliError;
use crate::gauge::EffectivePotential;
use crate::oracle::Grid;
use crate::spectra::SpectralLine;

pub const SPECTRUM_HEADER: &str = "level,E_sq_bar,E_minus,E_plus,physical,reason";

/// Shortest round-trip text for finite values, `nan` otherwise.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        "nan".to_string()
    }
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn spectrum_csv(lines: &[SpectralLine]) -> String {
    let mut s = String::from(SPECTRUM_HEADER);
    s.push('\n');
    for line in lines {
        let (minus, plus) = line.energies().unwrap_or((f64::NAN, f64::NAN));
        let reason = line.reason.map(|r| r.as_str()).unwrap_or("");
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            line.level,
            num(line.e_sq_bar),
            num(minus),
            num(plus),
            line.physical,
            reason
        ));
    }
    s
}

/// `w,value` rows on the grid, with a `w,nan` row at every pole inside it.
pub fn curve_csv(f: impl Fn(f64) -> f64, poles: &[f64], grid: Grid) -> String {
    let l = grid.half_width();
    let mut inside: Vec<f64> = poles.iter().copied().filter(|p| p.abs() < l).collect();
    inside.sort_by(f64::total_cmp);
    let mut s = String::from("w,value\n");
    let mut next = inside.iter().peekable();
    for w in grid.points() {
        while let Some(&&p) = next.peek() {
            if p > w {
                break;
            }
            if p < w {
                s.push_str(&format!("{},nan\n", num(p)));
            }
            next.next();
        }
        s.push_str(&format!("{},{}\n", num(w), num(f(w))));
    }
    for &p in next {
        s.push_str(&format!("{},nan\n", num(p)));
    }
    s
}

pub fn poles_note(poles: &[f64], grid: Grid) -> String {
    let mut s = String::from("# poles of the curve (w)\n");
    for p in poles {
        let tag = if p.abs() < grid.half_width() { "" } else { " (outside grid)" };
        s.push_str(&format!("{}{tag}\n", num(*p)));
    }
    s
}

pub fn potential_curve(pot: &EffectivePotential, grid: Grid) -> String {
    curve_csv(|w| pot.value(w), pot.poles(), grid)
}
