//! Report serialization. CSV files start with the resolved configuration
//! as `# key = value` comment lines, then a header row, then data rows;
//! JSON mirrors the same content under a `schema_version` field. Numbers
//! are written in shortest round-trip form and nothing time-dependent goes
//! into a file, so identical configurations produce identical bytes.

use crate::config::RunConfig;
use crate::operators::CommutationReport;
use crate::verifier::{BoundReport, DivergenceReport, PointwiseOutcome, VerificationReport};
use serde_json::{json, Value};
use std::io::{self, Write};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest representation that parses back to the same f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn write_preamble(w: &mut impl Write, cfg: &RunConfig) -> io::Result<()> {
    writeln!(w, "# schema_version = {SCHEMA_VERSION}")?;
    for (key, value) in cfg.echo_pairs() {
        writeln!(w, "# {key} = {value}")?;
    }
    Ok(())
}

fn config_json(cfg: &RunConfig) -> Value {
    let mut map = serde_json::Map::new();
    for (key, value) in cfg.echo_pairs() {
        map.insert(key.to_string(), Value::String(value));
    }
    Value::Object(map)
}

pub fn write_verification_csv(
    w: &mut impl Write,
    cfg: &RunConfig,
    report: &VerificationReport,
) -> io::Result<()> {
    write_preamble(w, cfg)?;
    let dim = report.xi.dim();
    if dim == 1 {
        writeln!(w, "xi,lhs_re,lhs_im,rhs_re,rhs_im,abs_res,rel_res")?;
    } else {
        let coords: Vec<String> = (0..dim).map(|a| format!("xi{a}")).collect();
        writeln!(w, "{},lhs_re,lhs_im,rhs_re,rhs_im,abs_res,rel_res", coords.join(","))?;
    }
    for i in 0..report.xi.len() {
        let coords: Vec<String> = report.xi.point(i).iter().map(|x| fmt_f64(*x)).collect();
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            coords.join(","),
            fmt_f64(report.lhs[i].re),
            fmt_f64(report.lhs[i].im),
            fmt_f64(report.rhs[i].re),
            fmt_f64(report.rhs[i].im),
            fmt_f64(report.abs_residual[i]),
            fmt_f64(report.rel_residual[i]),
        )?;
    }
    Ok(())
}

pub fn verification_json(cfg: &RunConfig, report: &VerificationReport) -> Value {
    let rows: Vec<Value> = (0..report.xi.len())
        .map(|i| {
            json!({
                "xi": report.xi.point(i),
                "lhs_re": report.lhs[i].re,
                "lhs_im": report.lhs[i].im,
                "rhs_re": report.rhs[i].re,
                "rhs_im": report.rhs[i].im,
                "abs_res": report.abs_residual[i],
                "rel_res": report.rel_residual[i],
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg),
        "rows": rows,
        "summary": {
            "l2_lhs": report.l2_lhs,
            "l2_rhs": report.l2_rhs,
            "max_rel_residual": report.max_rel_residual,
            "combined_error": report.combined_error,
            "pass": report.pass,
            "warnings": report.quadrature_warnings,
        },
    })
}

pub fn write_divergence_csv(
    w: &mut impl Write,
    cfg: &RunConfig,
    report: &DivergenceReport,
) -> io::Result<()> {
    write_preamble(w, cfg)?;
    writeln!(w, "T,partial_magnitude")?;
    for (t, m) in report.cutoffs.iter().zip(&report.partial_magnitudes) {
        writeln!(w, "{},{}", fmt_f64(*t), fmt_f64(*m))?;
    }
    writeln!(w, "fit_slope,{}", fmt_f64(report.fitted_slope))?;
    Ok(())
}

pub fn divergence_json(
    cfg: &RunConfig,
    report: &DivergenceReport,
    companion: Option<&DivergenceReport>,
) -> Value {
    fn one(r: &DivergenceReport) -> Value {
        json!({
            "p": r.p,
            "cutoffs": r.cutoffs,
            "partial_magnitudes": r.partial_magnitudes,
            "fit_slope": r.fitted_slope,
            "fit_intercept": r.fit_intercept,
            "fit_residual": r.fit_residual,
            "relative_fit_residual": r.relative_fit_residual,
        })
    }
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg),
        "scan": one(report),
        "companion": companion.map(one),
    })
}

pub fn write_pointwise_csv(
    w: &mut impl Write,
    cfg: &RunConfig,
    rows: &[(f64, PointwiseOutcome)],
) -> io::Result<()> {
    write_preamble(w, cfg)?;
    writeln!(w, "t,max_abs_residual,lhs_max")?;
    for (t, outcome) in rows {
        writeln!(
            w,
            "{},{},{}",
            fmt_f64(*t),
            fmt_f64(outcome.residual),
            fmt_f64(outcome.lhs_max)
        )?;
    }
    Ok(())
}

pub fn pointwise_json(cfg: &RunConfig, rows: &[(f64, PointwiseOutcome)]) -> Value {
    let entries: Vec<Value> = rows
        .iter()
        .map(|(t, o)| {
            json!({
                "t": t,
                "max_abs_residual": o.residual,
                "lhs_max": o.lhs_max,
                "warning": o.warning,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg),
        "rows": entries,
    })
}

pub fn write_bounds_csv(w: &mut impl Write, cfg: &RunConfig, report: &BoundReport) -> io::Result<()> {
    write_preamble(w, cfg)?;
    writeln!(w, "width,amplitude,f_l2,xp_combination,ratio,literal_ratio")?;
    for m in &report.members {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(m.width),
            fmt_f64(m.amplitude),
            fmt_f64(m.f_l2),
            fmt_f64(m.xp_combination),
            fmt_f64(m.ratio),
            m.literal_ratio.map(fmt_f64).unwrap_or_default(),
        )?;
    }
    writeln!(w, "max_ratio,{}", fmt_f64(report.max_ratio))?;
    writeln!(w, "min_ratio,{}", fmt_f64(report.min_ratio))?;
    Ok(())
}

pub fn bounds_json(cfg: &RunConfig, report: &BoundReport) -> Value {
    let members: Vec<Value> = report
        .members
        .iter()
        .map(|m| {
            json!({
                "width": m.width,
                "amplitude": m.amplitude,
                "f_l2": m.f_l2,
                "xp_combination": m.xp_combination,
                "ratio": m.ratio,
                "literal_ratio": m.literal_ratio,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg),
        "members": members,
        "max_ratio": report.max_ratio,
        "min_ratio": report.min_ratio,
    })
}

pub fn write_commutation_csv(
    w: &mut impl Write,
    cfg: &RunConfig,
    rows: &[(f64, CommutationReport)],
) -> io::Result<()> {
    write_preamble(w, cfg)?;
    writeln!(w, "t,fourier_dilation,dilation_inverse,inverse_fourier_dilation")?;
    for (t, r) in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(r.fourier_dilation),
            fmt_f64(r.dilation_inverse),
            fmt_f64(r.inverse_fourier_dilation)
        )?;
    }
    Ok(())
}

pub fn commutation_json(cfg: &RunConfig, rows: &[(f64, CommutationReport)]) -> Value {
    let entries: Vec<Value> = rows
        .iter()
        .map(|(t, r)| {
            json!({
                "t": t,
                "fourier_dilation": r.fourier_dilation,
                "dilation_inverse": r.dilation_inverse,
                "inverse_fourier_dilation": r.inverse_fourier_dilation,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg),
        "rows": entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::gaussian::GaussianState;
    use crate::params::make_params;
    use crate::quadrature::QuadratureSpec;
    use crate::verifier::{verify_identity, FrequencySet, ProfileData};

    #[test]
    fn verification_csv_schema() {
        let cfg = parse_config("command = verify\nn = 1\np = 4\ndata = gaussian:1.0\n").unwrap();
        let params = make_params(1, 4.0).unwrap();
        let xi = FrequencySet::uniform(1, 2.0, 5);
        let data = ProfileData::Gaussian(GaussianState::isotropic(1.0).unwrap());
        let report =
            verify_identity(&data, &params, &xi, &QuadratureSpec::default(), None, None).unwrap();

        let mut buf = Vec::new();
        write_verification_csv(&mut buf, &cfg, &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# schema_version = 1");
        let header = text
            .lines()
            .find(|l| !l.starts_with('#'))
            .unwrap();
        assert_eq!(header, "xi,lhs_re,lhs_im,rhs_re,rhs_im,abs_res,rel_res");
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 1 + 5); // header + one row per point

        // repeated serialization is byte-identical
        let mut buf2 = Vec::new();
        write_verification_csv(&mut buf2, &cfg, &report).unwrap();
        assert_eq!(text.as_bytes(), buf2.as_slice());

        let j = verification_json(&cfg, &report);
        assert_eq!(j["schema_version"], 1);
        assert_eq!(j["rows"].as_array().unwrap().len(), 5);
        assert!(j["summary"]["pass"].as_bool().unwrap());
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1, 1.0, 1e-300, 123456.789, -2.5e17, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
