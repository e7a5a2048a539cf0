//! CSV and SVG artifacts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use modelset::diffraction::Spectrum;
use modelset::{IntPoint, PointSetPatch, SchemeBasis, WeightedComb};
use num_complex::Complex64;

use crate::RunError;

fn header(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}{i}"))
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, RunError> {
    csv::Writer::from_path(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<(), RunError> {
    w.flush().map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

fn row(w: &mut csv::Writer<std::fs::File>, fields: Vec<String>) -> Result<(), RunError> {
    w.write_record(&fields).map_err(|e| RunError::Io(e.to_string()))
}

/// Columns `z…, x…, u…, weight_re, weight_im`.
pub fn write_points(path: &Path, comb: &WeightedComb) -> Result<(), RunError> {
    let p: &PointSetPatch = comb.patch();
    let s = p.scheme();
    let mut w = writer(path)?;
    let mut head: Vec<String> = header("z", s.n())
        .chain(header("x", s.d()))
        .chain(header("u", s.m()))
        .collect();
    head.extend(["weight_re".into(), "weight_im".into()]);
    row(&mut w, head)?;
    for ((z, e), wt) in p.points().iter().zip(p.embedded()).zip(comb.weights()) {
        let mut fields: Vec<String> = z.as_slice().iter().map(|c| c.to_string()).collect();
        fields.extend(e.physical.as_slice().iter().map(|v| num(*v)));
        fields.extend(e.internal.as_slice().iter().map(|v| num(*v)));
        fields.extend([num(wt.re), num(wt.im)]);
        row(&mut w, fields)?;
    }
    finish(w, path)
}

/// Columns `z…, x…, u…, re, im, abs`.
pub fn write_coefficients(
    path: &Path,
    scheme: &SchemeBasis,
    coeffs: &BTreeMap<IntPoint, Complex64>,
) -> Result<(), RunError> {
    let mut w = writer(path)?;
    let mut head: Vec<String> = header("z", scheme.n())
        .chain(header("x", scheme.d()))
        .chain(header("u", scheme.m()))
        .collect();
    head.extend(["re".into(), "im".into(), "abs".into()]);
    row(&mut w, head)?;
    for (k, v) in coeffs {
        let e = scheme.embed(k);
        let mut fields: Vec<String> = k.as_slice().iter().map(|c| c.to_string()).collect();
        fields.extend(e.physical.as_slice().iter().map(|v| num(*v)));
        fields.extend(e.internal.as_slice().iter().map(|v| num(*v)));
        fields.extend([num(v.re), num(v.im), num(v.norm())]);
        row(&mut w, fields)?;
    }
    finish(w, path)
}

/// Columns `n, R_n, value`.
pub fn write_null_means(path: &Path, radii: &[f64], values: &[f64]) -> Result<(), RunError> {
    let mut w = writer(path)?;
    row(&mut w, vec!["n".into(), "R_n".into(), "value".into()])?;
    for (i, (r, v)) in radii.iter().zip(values).enumerate() {
        row(&mut w, vec![(i + 1).to_string(), num(*r), num(*v)])?;
    }
    finish(w, path)
}

/// Columns `k…, intensity, method, R`, one block per spectrum.
pub fn write_spectra(path: &Path, d: usize, spectra: &[&Spectrum]) -> Result<(), RunError> {
    let mut w = writer(path)?;
    let mut head: Vec<String> = header("k", d).collect();
    head.extend(["intensity".into(), "method".into(), "R".into()]);
    row(&mut w, head)?;
    for sp in spectra {
        for e in &sp.entries {
            let mut fields: Vec<String> = e.frequency.k.as_slice().iter().map(|v| num(*v)).collect();
            fields.extend([num(e.intensity), sp.method.label().to_string(), num(sp.radius)]);
            row(&mut w, fields)?;
        }
    }
    finish(w, path)
}

/// Columns given by `head`, rows of plain numbers.
pub fn write_table(path: &Path, head: &[&str], rows: &[Vec<f64>]) -> Result<(), RunError> {
    let mut w = writer(path)?;
    row(&mut w, head.iter().map(|s| s.to_string()).collect())?;
    for r in rows {
        row(&mut w, r.iter().map(|v| num(*v)).collect())?;
    }
    finish(w, path)
}

/// Stick plot of intensity against the first frequency coordinate.
pub fn write_stick_svg(path: &Path, spectrum: &Spectrum, log_scale: bool) -> Result<(), RunError> {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 40.0;
    let pts: Vec<(f64, f64)> = spectrum
        .entries
        .iter()
        .filter(|e| e.intensity > 0.0)
        .map(|e| (e.frequency.k[0], e.intensity))
        .collect();
    let (kmin, kmax) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let imax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let floor = imax * 1e-6;
    let height = |i: f64| {
        if log_scale {
            ((i.max(floor) / floor).log10() / 6.0).clamp(0.0, 1.0)
        } else {
            i / imax
        }
    };
    let span = if kmax > kmin { kmax - kmin } else { 1.0 };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <line x1=\"{PAD}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        b = H - PAD,
        r = W - PAD
    );
    for (k, i) in &pts {
        let x = PAD + (k - kmin) / span * (W - 2.0 * PAD);
        let y = H - PAD - height(*i) * (H - 2.0 * PAD);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"navy\"/>\n",
            H - PAD
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{PAD}\" y=\"{}\" font-size=\"12\">k from {kmin:.3} to {kmax:.3}, {} scale, R = {}</text>\n</svg>\n",
        H - 10.0,
        if log_scale { "log" } else { "linear" },
        spectrum.radius
    ));
    let mut f = std::fs::File::create(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(svg.as_bytes()).map_err(|e| RunError::Io(e.to_string()))
}
