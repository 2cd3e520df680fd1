//! Text formats: CSV tables with a provenance comment line, and small JSON
//! documents. Every real number is written with 17 significant digits so it
//! parses back to the same `f64`.

use std::io::Write;

use serde::Deserialize;

use crate::analysis::{LogLogSeries, Prop1Check, SweepTable};
use crate::enumerate::{CsiszarCheck, RankCheck, RankedWord};
use crate::error::{Error, Result};
use crate::exponent::ExponentReport;
use crate::keyboard::{DistributionSpec, Keyboard, SpacingsSample};
use crate::scalar::Scalar;

pub const TOOL_NAME: &str = "monkey-zipf";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with 17 significant digits, in exponent form.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn num<T: Scalar>(x: T) -> String {
    sig17(x.to_f64().unwrap_or(f64::NAN))
}

/// Where an output came from. Rendered as the first line of every CSV and as
/// a `provenance` object in JSON.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub argv: Vec<String>,
    pub seed: Option<u64>,
    pub spec: Option<String>,
    pub c: Option<f64>,
}

impl Provenance {
    fn argv_line(&self) -> String {
        self.argv
            .iter()
            .map(|a| {
                if a.is_empty()
                    || a.chars()
                        .any(|c| c.is_whitespace() || c == '\'' || c == '"')
                {
                    format!("'{}'", a.replace('\'', "'\\''"))
                } else {
                    a.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn comment_line(&self) -> String {
        let mut line = format!("# {TOOL_NAME} {TOOL_VERSION} argv=[{}]", self.argv_line());
        if let Some(spec) = &self.spec {
            line.push_str(&format!(" spec={spec}"));
        }
        if let Some(c) = self.c {
            line.push_str(&format!(" c={}", sig17(c)));
        }
        if let Some(seed) = self.seed {
            line.push_str(&format!(" seed={seed}"));
        }
        line
    }

    pub fn to_json(&self) -> String {
        let mut fields = vec![
            format!("\"tool\":{}", json_str(TOOL_NAME)),
            format!("\"version\":{}", json_str(TOOL_VERSION)),
            format!(
                "\"argv\":[{}]",
                self.argv
                    .iter()
                    .map(|a| json_str(a))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        ];
        fields.push(format!(
            "\"spec\":{}",
            self.spec.as_deref().map_or("null".into(), json_str)
        ));
        fields.push(format!("\"c\":{}", self.c.map_or("null".into(), sig17)));
        fields.push(format!(
            "\"seed\":{}",
            self.seed.map_or("null".into(), |s| s.to_string())
        ));
        format!("{{{}}}", fields.join(","))
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

fn json_array<T: Scalar>(xs: &[T]) -> String {
    format!(
        "[{}]",
        xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
    )
}

fn f64_array(xs: &[f64]) -> String {
    format!(
        "[{}]",
        xs.iter().map(|&x| sig17(x)).collect::<Vec<_>>().join(",")
    )
}

pub fn spec_json(spec: &DistributionSpec) -> String {
    match spec {
        DistributionSpec::QuantileTable(t) => format!(
            "{{\"quantile_table\":[{}]}}",
            t.knots()
                .iter()
                .map(|(p, v)| format!("[{},{}]", sig17(*p), sig17(*v)))
                .collect::<Vec<_>>()
                .join(",")
        ),
        other => json_str(other.name()),
    }
}

/// Keyboard document: `{"K", "q", "s", "spec", "seed", ...}`. Spacings are
/// included when the keyboard came from a sample.
pub fn keyboard_json<T: Scalar>(
    kb: &Keyboard<T>,
    sample: Option<&SpacingsSample>,
    provenance: Option<&Provenance>,
) -> String {
    let mut fields = vec![
        format!("\"K\":{}", kb.k()),
        format!("\"q\":{}", json_array(kb.q())),
        format!("\"s\":{}", num(kb.s())),
        format!(
            "\"spec\":{}",
            sample.map_or("null".into(), |s| spec_json(&s.spec))
        ),
        format!(
            "\"seed\":{}",
            sample.map_or("null".into(), |s| s.seed.to_string())
        ),
    ];
    if let Some(s) = sample {
        fields.push(format!("\"spacings\":{}", f64_array(&s.spacings)));
        fields.push(format!(
            "\"sorted_spacings\":{}",
            f64_array(&s.sorted_spacings)
        ));
    }
    if let Some(p) = provenance {
        fields.push(format!("\"provenance\":{}", p.to_json()));
    }
    format!("{{{}}}\n", fields.join(","))
}

/// Fields read back from a keyboard document; anything else is ignored.
#[derive(Debug, Clone, Deserialize)]
pub struct KeyboardDoc {
    pub q: Vec<f64>,
    pub s: f64,
    #[serde(default)]
    pub spec: Option<DistributionSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl KeyboardDoc {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn keyboard<T: Scalar>(&self) -> Result<Keyboard<T>> {
        Keyboard::new(self.q.iter().map(|&x| T::of(x)).collect(), T::of(self.s))
    }
}

pub fn exponent_json<T: Scalar>(
    rep: &ExponentReport<T>,
    provenance: Option<&Provenance>,
) -> String {
    let mut fields = vec![
        format!("\"R0\":{}", num(rep.r0)),
        format!("\"beta\":{}", num(rep.beta)),
        format!("\"u\":{}", num(rep.u)),
        format!("\"b\":{}", num(rep.b)),
        format!("\"C1\":{}", num(rep.c1)),
        format!("\"C2\":{}", num(rep.c2)),
        format!("\"residual\":{}", num(rep.residual)),
        format!("\"alphas\":{}", json_array(&rep.alphas)),
    ];
    if let Some(p) = provenance {
        fields.push(format!("\"provenance\":{}", p.to_json()));
    }
    format!("{{{}}}\n", fields.join(","))
}

fn header<W: Write>(w: &mut W, provenance: Option<&Provenance>, columns: &str) -> Result<()> {
    if let Some(p) = provenance {
        writeln!(w, "{}", p.comment_line())?;
    }
    writeln!(w, "{columns}")?;
    Ok(())
}

pub fn write_exponent_csv<W: Write, T: Scalar>(
    w: &mut W,
    rep: &ExponentReport<T>,
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "R0,beta,u,b,C1,C2,residual")?;
    writeln!(
        w,
        "{},{},{},{},{},{},{}",
        num(rep.r0),
        num(rep.beta),
        num(rep.u),
        num(rep.b),
        num(rep.c1),
        num(rep.c2),
        num(rep.residual)
    )?;
    Ok(())
}

pub fn write_sample_csv<W: Write, T: Scalar>(
    w: &mut W,
    sample: &SpacingsSample,
    kb: &Keyboard<T>,
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "i,spacing,sorted_spacing,q")?;
    for (i, ((d, sd), q)) in sample
        .spacings
        .iter()
        .zip(&sample.sorted_spacings)
        .zip(kb.q())
        .enumerate()
    {
        writeln!(w, "{},{},{},{}", i + 1, sig17(*d), sig17(*sd), num(*q))?;
    }
    Ok(())
}

/// `rank,length,log_base,log10_base,word`.
pub fn write_ranked_csv<W: Write, T: Scalar>(
    w: &mut W,
    ranked: &[RankedWord<T>],
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "rank,length,log_base,log10_base,word")?;
    let ln10 = T::LN_10();
    for rw in ranked {
        writeln!(
            w,
            "{},{},{},{},{}",
            rw.rank,
            rw.word.len(),
            num(rw.word.log_base),
            num(rw.word.log_base / ln10),
            rw.word.label()
        )?;
    }
    Ok(())
}

/// `t,N,Ncum,lower,upper,ok`.
pub fn write_counts_csv<W: Write, T: Scalar>(
    w: &mut W,
    rows: &[(CsiszarCheck<T>, u128)],
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "t,N,Ncum,lower,upper,ok")?;
    for (row, n_cum) in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            num(row.t),
            row.n,
            n_cum,
            num(row.lower),
            num(row.upper),
            row.ok
        )?;
    }
    Ok(())
}

/// `rank,log_base,log_lower,log_upper,ok`.
pub fn write_rank_checks_csv<W: Write, T: Scalar>(
    w: &mut W,
    rows: &[RankCheck<T>],
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "rank,log_base,log_lower,log_upper,ok")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.rank,
            num(r.log_base),
            num(r.log_lower),
            num(r.log_upper),
            r.ok
        )?;
    }
    Ok(())
}

/// `K,mu_bar,minus_beta,ratio,holds`.
pub fn write_prop1_csv<W: Write, T: Scalar>(
    w: &mut W,
    k: usize,
    check: &Prop1Check<T>,
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "K,mu_bar,minus_beta,ratio,holds")?;
    writeln!(
        w,
        "{},{},{},{},{}",
        k,
        num(check.mu_bar),
        num(check.minus_beta),
        num(check.ratio),
        check.holds
    )?;
    Ok(())
}

/// `rank,log_rank,log_base`.
pub fn write_series_csv<W: Write, T: Scalar>(
    w: &mut W,
    series: &LogLogSeries<T>,
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "rank,log_rank,log_base")?;
    for ((r, x), y) in series
        .ranks
        .iter()
        .zip(&series.log_rank)
        .zip(&series.log_base)
    {
        writeln!(w, "{},{},{}", r, num(*x), num(*y))?;
    }
    Ok(())
}

/// `K,seed,beta,mu_bar,abs_err`.
pub fn write_sweep_csv<W: Write>(
    w: &mut W,
    table: &SweepTable,
    provenance: Option<&Provenance>,
) -> Result<()> {
    header(w, provenance, "K,seed,beta,mu_bar,abs_err")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.k,
            r.seed,
            sig17(r.beta),
            sig17(r.mu_bar),
            sig17(r.abs_err)
        )?;
    }
    Ok(())
}

/// Splits CSV text into data rows, skipping `#` comments and the header.
pub fn csv_rows(text: &str) -> Result<Vec<Vec<&str>>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next().is_none() {
        return Err(Error::invalid("empty CSV"));
    }
    Ok(lines.map(|l| l.split(',').collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::top_n;
    use crate::exponent::solve_root;
    use crate::keyboard::{
        keyboard_from_spacings, miller_keyboard, sample_spacings, QuantileTable,
    };
    use proptest::prelude::*;

    #[test]
    fn keyboard_document_round_trips() {
        let sample = sample_spacings(&DistributionSpec::Uniform, 26, 77).unwrap();
        let kb: Keyboard<f64> = keyboard_from_spacings(&sample, 0.82).unwrap();
        let prov = Provenance {
            argv: vec!["sample".into(), "--K".into(), "26".into()],
            seed: Some(77),
            spec: Some("uniform".into()),
            c: Some(0.82),
        };
        let text = keyboard_json(&kb, Some(&sample), Some(&prov));
        let doc = KeyboardDoc::parse(&text).unwrap();
        assert_eq!(doc.seed, Some(77));
        assert_eq!(doc.spec, Some(DistributionSpec::Uniform));
        assert_eq!(doc.keyboard::<f64>().unwrap(), kb);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["provenance"]["seed"], 77);
    }

    #[test]
    fn quantile_table_spec_round_trips() {
        let spec = DistributionSpec::QuantileTable(
            QuantileTable::new(vec![(0.0, 0.0), (0.3, 0.5), (1.0, 1.0)]).unwrap(),
        );
        let text = spec_json(&spec);
        let back: DistributionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert!(
            serde_json::from_str::<DistributionSpec>(r#"{"quantile_table":[[0,0],[1,0.5]]}"#)
                .is_err()
        );
    }

    #[test]
    fn exponent_document_fields() {
        let rep = solve_root(&miller_keyboard(26, 0.18).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&exponent_json(&rep, None)).unwrap();
        for key in ["R0", "beta", "b", "C1", "C2", "residual"] {
            assert!(v[key].is_number(), "{key}");
        }
        assert_eq!(v["R0"].as_f64().unwrap(), rep.r0);
    }

    #[test]
    fn ranked_csv_layout() {
        let kb = Keyboard::new(vec![0.5, 0.25], 0.25).unwrap();
        let mut buf = Vec::new();
        write_ranked_csv(&mut buf, &top_n(&kb, 4).unwrap(), None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "rank,length,log_base,log10_base,word");
        assert!(lines[1].starts_with("1,0,0.0000000000000000e0,"));
        assert!(lines[1].ends_with(','));
        assert!(lines[4].ends_with(",1.1"));
    }

    #[test]
    fn provenance_header_quotes_arguments() {
        let prov = Provenance {
            argv: vec!["figure".into(), "--out".into(), "my file.csv".into()],
            ..Default::default()
        };
        assert_eq!(
            prov.comment_line(),
            format!("# monkey-zipf {TOOL_VERSION} argv=[figure --out 'my file.csv']")
        );
    }

    proptest! {
        #[test]
        fn sig17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }
}
