//! Symbol-spec files: piecewise angle maps on `[−π, π)` given as
//! breakpoints plus per-piece closed-form tags from a small catalog, from
//! which both the angle map and the unimodular symbol `φ = e^{−iα}` are
//! built.
//!
//! The document is JSON:
//!
//! ```json
//! {
//!   "breakpoints": [-3.141592653589793, 0.0],
//!   "pieces": [
//!     { "tag": "power", "exponent": 0.5, "target": [0.0, 3.141592653589793],
//!       "reversed": true },
//!     { "tag": "power", "exponent": 2.0, "target": [0.0, -3.141592653589793] }
//!   ]
//! }
//! ```
//!
//! `breakpoints` must start at `−π` and increase; piece `i` acts on
//! `[breakpoints[i], breakpoints[i+1])`, the last piece wrapping to `π`.
//! Tags:
//!
//! * `"identity"` — `α(θ) = θ`;
//! * `"reflection"` with `axis` — `α(θ) = 2·axis − θ` (wrapped);
//! * `"negation-flip"` — `α(θ) = θ + π` (wrapped);
//! * `"power"` with `exponent > 0`, `target: [c, d]`, optional
//!   `reversed` — in the normalized piece coordinate
//!   `t = (θ − a)/(b − a)` (or `1 − t` when reversed), `α = c + (d − c)·tᵖ`.
//!   Degenerate targets (`c = d`) give constant pieces; a descending target
//!   (`d < c`) reverses orientation.

use anyhow::{bail, Context, Result};
use conjorbit::circle::{CircleMap, CircleSymbol};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PieceSpec {
    Identity,
    Reflection { axis: f64 },
    NegationFlip,
    Power {
        exponent: f64,
        target: [f64; 2],
        #[serde(default)]
        reversed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<PieceSpec>,
}

fn wrap(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = (theta + PI).rem_euclid(two_pi) - PI;
    if t >= PI {
        t -= two_pi;
    }
    t
}

impl SymbolSpec {
    pub fn load(path: &Path) -> Result<SymbolSpec> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading symbol spec {}", path.display()))?;
        let spec: SymbolSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing symbol spec {}", path.display()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<SymbolSpec> {
        let spec: SymbolSpec = serde_json::from_str(text).context("parsing symbol spec")?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            bail!("symbol spec has no pieces");
        }
        if self.breakpoints.len() != self.pieces.len() {
            bail!(
                "{} breakpoints for {} pieces; each piece starts at its breakpoint",
                self.breakpoints.len(),
                self.pieces.len()
            );
        }
        if (self.breakpoints[0] + PI).abs() > 1e-12 {
            bail!(
                "the first breakpoint must be -pi, got {}",
                self.breakpoints[0]
            );
        }
        for w in self.breakpoints.windows(2) {
            if w[1] <= w[0] {
                bail!("breakpoints must increase, got {} after {}", w[1], w[0]);
            }
        }
        if *self.breakpoints.last().unwrap() >= PI {
            bail!("breakpoints must stay below pi");
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            if let PieceSpec::Power { exponent, target, .. } = piece {
                if !(*exponent > 0.0) {
                    bail!("piece {i}: power exponent must be positive, got {exponent}");
                }
                for v in target {
                    if !v.is_finite() || v.abs() > PI + 1e-12 {
                        bail!("piece {i}: target endpoint {v} outside [-pi, pi]");
                    }
                }
            }
            if let PieceSpec::Reflection { axis } = piece {
                if !axis.is_finite() {
                    bail!("piece {i}: reflection axis must be finite");
                }
            }
        }
        Ok(())
    }

    /// Source interval `[a, b)` of piece `i` (the last piece ends at `π`).
    fn piece_span(&self, i: usize) -> (f64, f64) {
        let a = self.breakpoints[i];
        let b = if i + 1 < self.breakpoints.len() {
            self.breakpoints[i + 1]
        } else {
            PI
        };
        (a, b)
    }

    fn piece_index(&self, theta: f64) -> usize {
        let t = wrap(theta);
        match self
            .breakpoints
            .partition_point(|&b| b <= t)
        {
            0 => 0, // t == -pi lands in the first piece
            p => p - 1,
        }
    }

    /// The angle at `theta`.
    pub fn angle(&self, theta: f64) -> f64 {
        let t = wrap(theta);
        let i = self.piece_index(t);
        let (a, b) = self.piece_span(i);
        let value = match &self.pieces[i] {
            PieceSpec::Identity => t,
            PieceSpec::Reflection { axis } => 2.0 * axis - t,
            PieceSpec::NegationFlip => t + PI,
            PieceSpec::Power {
                exponent,
                target,
                reversed,
            } => {
                let mut s = (t - a) / (b - a);
                if *reversed {
                    s = 1.0 - s;
                }
                target[0] + (target[1] - target[0]) * s.powf(*exponent)
            }
        };
        wrap(value)
    }

    /// The derivative `dα/dθ` at `theta`, where defined.  `None` only for
    /// degenerate (constant) power pieces, whose derivative is zero but
    /// whose densities are not meaningful for membership anyway.
    fn angle_derivative(&self, theta: f64) -> f64 {
        let t = wrap(theta);
        let i = self.piece_index(t);
        let (a, b) = self.piece_span(i);
        match &self.pieces[i] {
            PieceSpec::Identity => 1.0,
            PieceSpec::Reflection { .. } => -1.0,
            PieceSpec::NegationFlip => 1.0,
            PieceSpec::Power {
                exponent,
                target,
                reversed,
            } => {
                let mut s = (t - a) / (b - a);
                let mut orientation = 1.0;
                if *reversed {
                    s = 1.0 - s;
                    orientation = -1.0;
                }
                let s = s.max(0.0);
                orientation * (target[1] - target[0]) * exponent * s.powf(exponent - 1.0)
                    / (b - a)
            }
        }
    }

    /// Whether every piece has a meaningful derivative (no constant pieces).
    fn differentiable(&self) -> bool {
        self.pieces.iter().all(|p| match p {
            PieceSpec::Power { target, .. } => (target[1] - target[0]).abs() > 1e-12,
            _ => true,
        })
    }

    /// Build the angle map, with derivative information when available.
    pub fn to_map(&self) -> Result<CircleMap> {
        let spec = self.clone();
        let mut boundaries = self.breakpoints.clone();
        boundaries[0] = -PI; // snap the validated first breakpoint exactly
        let derivative: Option<Box<dyn Fn(f64) -> f64>> = if self.differentiable() {
            let dspec = self.clone();
            Some(Box::new(move |t| dspec.angle_derivative(t)))
        } else {
            None
        };
        CircleMap::new(Box::new(move |t| spec.angle(t)), derivative, boundaries)
            .map_err(|e| anyhow::anyhow!("{e}"))
    }

    /// The unimodular symbol `φ(θ) = e^{−iα(θ)}` tied to the map.
    pub fn to_symbol(&self) -> CircleSymbol {
        let spec = self.clone();
        CircleSymbol::from_angle_fn(move |t| spec.angle(t))
    }

    /// One-line description, e.g. for decision output.
    pub fn describe(&self) -> String {
        let tags: Vec<String> = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let (a, b) = self.piece_span(i);
                let tag = match p {
                    PieceSpec::Identity => "identity".to_string(),
                    PieceSpec::Reflection { axis } => format!("reflection(axis {axis})"),
                    PieceSpec::NegationFlip => "negation-flip".to_string(),
                    PieceSpec::Power {
                        exponent,
                        target,
                        reversed,
                    } => format!(
                        "power(p {exponent}, onto [{:.3}, {:.3}]{})",
                        target[0],
                        target[1],
                        if *reversed { ", reversed" } else { "" }
                    ),
                };
                format!("[{a:.3}, {b:.3}) {tag}")
            })
            .collect();
        tags.join("; ")
    }
}

/// Canned spec documents reproducing the worked catalog, used by tests and
/// available as templates.
pub mod canned {
    use std::f64::consts::PI;

    pub fn identity() -> String {
        r#"{ "breakpoints": [-3.141592653589793], "pieces": [ { "tag": "identity" } ] }"#.into()
    }

    pub fn reflection(axis: f64) -> String {
        format!(
            r#"{{ "breakpoints": [-3.141592653589793], "pieces": [ {{ "tag": "reflection", "axis": {axis} }} ] }}"#
        )
    }

    pub fn negation() -> String {
        r#"{ "breakpoints": [-3.141592653589793], "pieces": [ { "tag": "negation-flip" } ] }"#
            .into()
    }

    /// The involutive flip pairing the half-circles: `−θ²/π` on `[0, π)`,
    /// `√(−πθ)` on `[−π, 0)`.
    pub fn quadratic_flip() -> String {
        format!(
            r#"{{ "breakpoints": [-{pi}, 0.0],
  "pieces": [
    {{ "tag": "power", "exponent": 0.5, "target": [0.0, {pi}], "reversed": true }},
    {{ "tag": "power", "exponent": 2.0, "target": [0.0, -{pi}] }}
  ] }}"#,
            pi = PI
        )
    }

    /// Strictly increasing non-identity reparametrization `t ↦ tᵖ` in
    /// normalized coordinates.
    pub fn power_increasing(p: f64) -> String {
        format!(
            r#"{{ "breakpoints": [-{pi}],
  "pieces": [ {{ "tag": "power", "exponent": {p}, "target": [-{pi}, {pi}] }} ] }}"#,
            pi = PI
        )
    }

    /// The angle action of the ±1 half-circle symbol: constant 0 on the
    /// right half-circle, constant ±π on the left quarters.
    pub fn halfcircle() -> String {
        format!(
            r#"{{ "breakpoints": [-{pi}, -{h}, {h}],
  "pieces": [
    {{ "tag": "power", "exponent": 1.0, "target": [-{pi}, -{pi}] }},
    {{ "tag": "power", "exponent": 1.0, "target": [0.0, 0.0] }},
    {{ "tag": "power", "exponent": 1.0, "target": [{pi}, {pi}] }}
  ] }}"#,
            pi = PI,
            h = PI / 2.0
        )
    }
}
