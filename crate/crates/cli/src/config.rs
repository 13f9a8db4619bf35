//! Run configuration: the JSON schema behind `sweep --config` and the
//! shipped figure presets, plus the state-token and number formatting
//! shared by the subcommands.

use quditmem::analysis::{ChannelSpec, CurveSpec};
use serde::{Deserialize, Serialize};

/// A fully specified sweep run. Parsing validates the channel and every
/// curve before any computation happens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelSpec,
    pub grid: GridSpec,
    pub curves: Vec<CurveConfig>,
    #[serde(default = "default_spot_checks")]
    pub spot_checks: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_spot_checks() -> usize {
    quditmem::analysis::DEFAULT_SPOT_CHECKS
}

fn default_tolerance() -> f64 {
    quditmem::analysis::DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: usize,
    #[serde(default)]
    pub min: f64,
    #[serde(default = "default_grid_max")]
    pub max: f64,
}

fn default_grid_max() -> f64 {
    1.0
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        if self.points < 2 {
            return Err("grid needs at least 2 points".into());
        }
        if !(0.0..=1.0).contains(&self.min) || !(0.0..=1.0).contains(&self.max) || self.min >= self.max
        {
            return Err("grid bounds must satisfy 0 <= min < max <= 1".into());
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| (self.min + i as f64 * step).min(self.max))
            .collect())
    }
}

/// One curve of a sweep. `alpha`/`km` take either `cos2` directly or the
/// caption-style `n` with `cos^2 = 1/sqrt(n)`; `ksupport` takes `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cos2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CurveConfig {
    pub fn resolve(&self) -> Result<(CurveSpec, String), String> {
        let cos2 = match (self.cos2, self.n) {
            (Some(c), None) => Some(c),
            (None, Some(n)) if n > 0.0 => Some(1.0 / n.sqrt()),
            (None, None) => None,
            _ => return Err(format!("curve `{}`: give exactly one of cos2/n", self.state)),
        };
        let spec = match self.state.as_str() {
            "maxent" => CurveSpec::MaxEnt,
            "product" => CurveSpec::Product,
            "alpha" => CurveSpec::Alpha {
                cos2: cos2.ok_or("alpha curve needs cos2 or n")?,
            },
            "km" => CurveSpec::Km {
                cos2: cos2.ok_or("km curve needs cos2 or n")?,
            },
            "ksupport" => CurveSpec::KSupport {
                k: self.k.ok_or("ksupport curve needs k")?,
            },
            other => return Err(format!("unknown state family `{other}`")),
        };
        if let CurveSpec::Alpha { cos2 } | CurveSpec::Km { cos2 } = spec {
            if !(0.0..=1.0).contains(&cos2) {
                return Err(format!("cos^2 must lie in [0, 1], got {cos2}"));
            }
        }
        Ok((spec, self.label.clone().unwrap_or_else(|| spec.label())))
    }
}

/// Command-line state token: `maxent`, `product`, `alpha:<cos2>`,
/// `alpha:n=<n>`, `km:<cos2>`, `km:n=<n>`, `k:<int>`.
pub fn parse_state_token(token: &str) -> Result<CurveSpec, String> {
    let (head, param) = match token.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (token, None),
    };
    let config = match (head, param) {
        ("maxent", None) => CurveConfig {
            state: "maxent".into(),
            cos2: None,
            n: None,
            k: None,
            label: None,
        },
        ("product", None) => CurveConfig {
            state: "product".into(),
            cos2: None,
            n: None,
            k: None,
            label: None,
        },
        ("alpha" | "km", Some(p)) => {
            let (cos2, n) = parse_angle_param(p)?;
            CurveConfig {
                state: head.into(),
                cos2,
                n,
                k: None,
                label: None,
            }
        }
        ("k", Some(p)) => CurveConfig {
            state: "ksupport".into(),
            cos2: None,
            n: None,
            k: Some(p.parse().map_err(|_| format!("bad k value `{p}`"))?),
            label: None,
        },
        _ => return Err(format!("cannot parse state token `{token}`")),
    };
    config.resolve().map(|(spec, _)| spec)
}

fn parse_angle_param(p: &str) -> Result<(Option<f64>, Option<f64>), String> {
    if let Some(rest) = p.strip_prefix("n=") {
        let n: f64 = rest.parse().map_err(|_| format!("bad n value `{rest}`"))?;
        Ok((None, Some(n)))
    } else {
        let cos2: f64 = p.parse().map_err(|_| format!("bad cos2 value `{p}`"))?;
        Ok((Some(cos2), None))
    }
}

/// 12 significant digits, plain positional notation, '.' separator.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000000".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn fmt_complex(z: quditmem::C64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_sig12(z.re), sign, fmt_sig12(z.im.abs()))
}

/// CSV rendering of a sweep table: header row first, one row per grid
/// point, 12 significant digits, `\n` endings.
pub fn render_csv(table: &quditmem::analysis::SweepTable) -> String {
    let mut out = String::from("mu");
    for curve in &table.curves {
        out.push(',');
        out.push_str(&curve.label);
    }
    out.push('\n');
    for (i, mu) in table.mu_grid.iter().enumerate() {
        out.push_str(&fmt_sig12(*mu));
        for curve in &table.curves {
            out.push(',');
            out.push_str(&fmt_sig12(curve.values[i]));
        }
        out.push('\n');
    }
    out
}

pub const FIGURE_PRESETS: [(&str, &str); 5] = [
    ("fig1", include_str!("../presets/fig1.json")),
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
];

pub fn preset(name: &str) -> Option<RunConfig> {
    FIGURE_PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, json)| serde_json::from_str(json).expect("shipped preset parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        for (_, json) in FIGURE_PRESETS {
            let parsed: RunConfig = serde_json::from_str(json).unwrap();
            let serialized = serde_json::to_string(&parsed).unwrap();
            let reparsed: RunConfig = serde_json::from_str(&serialized).unwrap();
            assert_eq!(parsed, reparsed);
        }
    }

    #[test]
    fn presets_resolve_to_valid_runs() {
        for (name, _) in FIGURE_PRESETS {
            let cfg = preset(name).unwrap();
            cfg.channel.table::<f64>().unwrap();
            assert!(cfg.grid.values().unwrap().len() == cfg.grid.points);
            for c in &cfg.curves {
                c.resolve().unwrap();
            }
        }
    }

    #[test]
    fn state_tokens() {
        assert_eq!(parse_state_token("maxent").unwrap(), CurveSpec::MaxEnt);
        assert_eq!(parse_state_token("product").unwrap(), CurveSpec::Product);
        match parse_state_token("alpha:n=2").unwrap() {
            CurveSpec::Alpha { cos2 } => assert!((cos2 - 1.0 / 2f64.sqrt()).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        match parse_state_token("km:0.5").unwrap() {
            CurveSpec::Km { cos2 } => assert_eq!(cos2, 0.5),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_state_token("k:3").unwrap(),
            CurveSpec::KSupport { k: 3 }
        );
        assert!(parse_state_token("bell").is_err());
        assert!(parse_state_token("alpha:1.5").is_err());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(fmt_sig12(0.0), "0.000000000000");
        assert_eq!(fmt_sig12(1.0), "1.00000000000");
        assert_eq!(fmt_sig12(8.0), "8.00000000000");
        assert_eq!(fmt_sig12(0.005), "0.00500000000000");
        assert_eq!(fmt_sig12(0.4512050593046014), "0.451205059305");
        assert_eq!(fmt_sig12(-0.25), "-0.250000000000");
    }
}
