//! CSV exports: Wigner grids, coherent-state amplitudes, spectra.

use std::io::Write;

use gklandau::gkcs::{build_cs, required_n_max, TAIL_LIMIT};
use gklandau::hamiltonians::spectrum_h1;
use gklandau::wigner::wigner_dyad;
use thiserror::Error;

use crate::config::RunConfig;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Numeric(#[from] gklandau::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// `x,y,re,im` for the transformed dyad `|n><l|` on the configured grid.
pub fn wigner_grid<W: Write>(cfg: &RunConfig, n: usize, l: usize, w: W) -> Result<(), ExportError> {
    let grid = wigner_dyad(n, l, &cfg.grid()?)?;
    grid.write_csv(w)?;
    Ok(())
}

/// `n,l,re,im,abs2` for the fixed-`l` state of the configured label,
/// rescaled to a unit vector within its `l` sector. Without a configured
/// `n_max` the truncation comes from the `J` tail bound.
pub fn cs_amplitudes<W: Write>(cfg: &RunConfig, w: W) -> Result<(), ExportError> {
    let label = cfg.label;
    let n_max = cfg
        .truncations
        .n_max
        .unwrap_or_else(|| required_n_max(label.j, TAIL_LIMIT));
    let cs = build_cs(&label, n_max, None)?;
    let scale = cs.discrete.norm_sqr().sqrt();
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "l", "re", "im", "abs2"])?;
    for (n, c) in cs.discrete.coeffs.iter().enumerate() {
        let a = c / scale;
        out.write_record([
            n.to_string(),
            label.l.to_string(),
            a.re.to_string(),
            a.im.to_string(),
            a.norm_sqr().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `n,alpha,energy` of `H1` for `n <= n_max`.
pub fn spectrum<W: Write>(cfg: &RunConfig, n_max: usize, alpha: f64, w: W) -> Result<(), ExportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "alpha", "energy"])?;
    for n in 0..=n_max {
        let e = spectrum_h1(n, alpha, &cfg.params);
        out.write_record([n.to_string(), alpha.to_string(), e.energy.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(buf: Vec<u8>) -> Vec<Vec<String>> {
        let mut r = csv::Reader::from_reader(buf.as_slice());
        r.records()
            .map(|x| x.unwrap().iter().map(String::from).collect())
            .collect()
    }

    #[test]
    fn free_spectrum_is_half_integer() {
        let mut cfg = RunConfig::default();
        cfg.params.lambda = 0.0;
        let mut buf = Vec::new();
        spectrum(&cfg, 5, 0.0, &mut buf).unwrap();
        let e: Vec<f64> = rows(buf).iter().map(|r| r[2].parse().unwrap()).collect();
        assert_eq!(e, vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
    }

    #[test]
    fn vacuum_label_is_one_row() {
        let mut cfg = RunConfig::default();
        cfg.label.j = 0.0;
        cfg.label.l = 2;
        let mut buf = Vec::new();
        cs_amplitudes(&cfg, &mut buf).unwrap();
        let r = rows(buf);
        assert_eq!(r.len(), 1);
        assert_eq!(&r[0][..2], ["0", "2"]);
        assert!((r[0][4].parse::<f64>().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn amplitudes_are_a_unit_vector() {
        let cfg = RunConfig::default();
        let mut buf = Vec::new();
        cs_amplitudes(&cfg, &mut buf).unwrap();
        let total: f64 = rows(buf).iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
