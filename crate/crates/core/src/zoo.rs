//! Built-in fixtures with known curvature.
//!
//! | id            | geometry                                   | default split |
//! |---------------|--------------------------------------------|---------------|
//! | `flat<n>`     | identity frame on `[-1, 1]^n`              | none          |
//! | `s2`          | unit sphere, `{∂p, csc p ∂q}`              | none          |
//! | `s3`          | unit 3-sphere, stereographic chart         | `r = 1`       |
//! | `h2`          | hyperbolic plane of curvature `K`          | none          |
//! | `nil3`        | Heisenberg group, left-invariant frame     | `r = 2`       |
//! | `seven`       | `N × S² × H`, collapse along `{e1, e4, e5}` | `r = 4`       |
//! | `lie:<name>`  | constants only (`su2`, `abelian3`, `heisenberg`) | `r = 1` |

use std::f64::consts::PI;

use serde::Serialize;

use crate::collapse::SplitSpec;
use crate::error::{Error, Result};
use crate::geometry::{ChartManifold, DerivativeEngine, Interval, Point};
use crate::sampling::sample_box;
use crate::structure::{ChartFrame, FrameSource, LieFrame, StructureTensor};

/// Gaussian curvature of the hyperbolic factor of `seven` unless overridden.
pub const DEFAULT_K_H: f64 = -4.0;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the published source of the example.
    Published,
    /// Immediate from the definitions.
    Trivial,
    /// Computed independently (closed form or coordinate check).
    Derived,
}

/// A known value, with its provenance and a short description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expected {
    pub quantity: &'static str,
    pub value: f64,
    pub provenance: Provenance,
    pub note: &'static str,
}

impl Expected {
    fn new(quantity: &'static str, value: f64, provenance: Provenance, note: &'static str) -> Self {
        Self {
            quantity,
            value,
            provenance,
            note,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Chart(ChartManifold),
    Lie(LieFrame),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZooEntry {
    pub id: String,
    pub geometry: Geometry,
    pub default_split: Option<SplitSpec>,
    pub expected: Vec<Expected>,
}

impl ZooEntry {
    pub fn dim(&self) -> usize {
        match &self.geometry {
            Geometry::Chart(m) => m.dim(),
            Geometry::Lie(l) => l.dim(),
        }
    }

    pub fn chart(&self) -> Option<&ChartManifold> {
        match &self.geometry {
            Geometry::Chart(m) => Some(m),
            Geometry::Lie(_) => None,
        }
    }

    pub fn lie(&self) -> Option<&LieFrame> {
        match &self.geometry {
            Geometry::Lie(l) => Some(l),
            Geometry::Chart(_) => None,
        }
    }

    /// The frame as a [`FrameSource`], differentiated with `engine`.
    pub fn source(&self, engine: DerivativeEngine) -> Box<dyn FrameSource + '_> {
        match &self.geometry {
            Geometry::Chart(m) => Box::new(ChartFrame::new(m, engine)),
            Geometry::Lie(l) => Box::new(l.clone()),
        }
    }

    /// Sample points in the chart box; a Lie entry has a single (empty) point.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        match &self.geometry {
            Geometry::Chart(m) => sample_box(m.sample_box(), count, seed),
            Geometry::Lie(_) => Ok(vec![Point::new(Vec::new())?]),
        }
    }

    /// Every split `r ∈ 1..n`.
    pub fn admissible_splits(&self) -> Vec<SplitSpec> {
        let n = self.dim();
        (1..n)
            .map(|r| SplitSpec::with_rank(n, r).expect("r < n"))
            .collect()
    }

    pub fn expected(&self, quantity: &str) -> Option<&Expected> {
        self.expected.iter().find(|e| e.quantity == quantity)
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("static interval")
}

fn rows(frame: &[&[&str]]) -> Vec<Vec<String>> {
    frame
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Identity frame on `[-1, 1]^n`, `1 ≤ n ≤ 8`.
pub fn flat(n: usize) -> Result<ZooEntry> {
    if !(1..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!("flat(n) needs 1 <= n <= 8, got {n}")));
    }
    let coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let frame: Vec<Vec<String>> = (0..n)
        .map(|a| (0..n).map(|i| if a == i { "1" } else { "0" }.to_string()).collect())
        .collect();
    let m = ChartManifold::parse(format!("flat{n}"), &refs, &frame, vec![iv(-1.0, 1.0); n])?;
    Ok(ZooEntry {
        id: format!("flat{n}"),
        geometry: Geometry::Chart(m),
        default_split: None,
        expected: vec![
            Expected::new("S", 0.0, Provenance::Trivial, "flat metric"),
            Expected::new("profile", 0.0, Provenance::Trivial, "all structure functions vanish"),
        ],
    })
}

/// Unit 2-sphere in colatitude/longitude `(p, q)`.
pub fn sphere2() -> ZooEntry {
    let m = ChartManifold::parse(
        "s2",
        &["p", "q"],
        &rows(&[&["1", "0"], &["0", "csc(p)"]]),
        vec![iv(0.2, PI - 0.2), iv(0.2, 2.0 * PI - 0.2)],
    )
    .expect("static chart");
    ZooEntry {
        id: "s2".into(),
        geometry: Geometry::Chart(m),
        default_split: None,
        expected: vec![
            Expected::new("S", 2.0, Provenance::Derived, "2 csc²p − 2 cot²p"),
            Expected::new("c[1][0][1]", -1.0, Provenance::Derived, "−cot p at p = π/4"),
        ],
    }
}

/// The frame `(Z, X, Y)` of the unit 3-sphere, pushed to the stereographic
/// chart from `(0, 0, 0, 1)`.
///
/// With `x = (2y, |y|² − 1)/(1 + |y|²)`, an ambient field `V` has chart
/// components `V^i (1 + |y|²)/2 + y_i V⁴ (1 + |y|²)/2`, which for these three
/// fields are polynomials in `y`.
pub fn sphere3_chart() -> ChartManifold {
    let h = "(1 - y1^2 - y2^2 - y3^2)/2";
    let z = [
        "-y2 + y1*y3".to_string(),
        "y1 + y2*y3".to_string(),
        format!("{h} + y3^2"),
    ];
    let x = [
        format!("{h} + y1^2"),
        "-y3 + y1*y2".to_string(),
        "y2 + y1*y3".to_string(),
    ];
    let y = [
        "y3 + y1*y2".to_string(),
        format!("{h} + y2^2"),
        "-y1 + y2*y3".to_string(),
    ];
    let frame = vec![z.to_vec(), x.to_vec(), y.to_vec()];
    ChartManifold::parse("s3", &["y1", "y2", "y3"], &frame, vec![iv(-1.1, 1.1); 3])
        .and_then(|m| m.with_labels(labels(&["Z", "X", "Y"])))
        .expect("static chart")
}

/// `[X, Y] = −2Z`, `[X, Z] = 2Y`, `[Y, Z] = −2X` in the order `(X, Y, Z)`.
pub fn su2_constants() -> StructureTensor {
    StructureTensor::from_entries(3, &[(2, 0, 1, -2.0), (1, 0, 2, 2.0), (0, 1, 2, -2.0)])
        .expect("static constants")
}

/// Unit 3-sphere in the chart representation, collapsing along `{X, Y}`.
pub fn sphere3() -> ZooEntry {
    ZooEntry {
        id: "s3".into(),
        geometry: Geometry::Chart(sphere3_chart()),
        default_split: Some(SplitSpec::with_rank(3, 1).expect("static split")),
        expected: s3_expected(),
    }
}

fn s3_expected() -> Vec<Expected> {
    vec![
        Expected::new("S", 6.0, Provenance::Published, "−2f⁴ + 8f² at f = 1"),
        Expected::new("q4", -2.0, Provenance::Published, "collapse along a non-involutive plane"),
        Expected::new("q2", 8.0, Provenance::Published, ""),
        Expected::new("q0", 0.0, Provenance::Published, ""),
        Expected::new("qm2", 0.0, Provenance::Published, ""),
        Expected::new("threshold", 2.0, Provenance::Published, "S < 0 for f > 2"),
        Expected::new("S1", 0.0, Provenance::Trivial, "one-dimensional block"),
    ]
}

/// Hyperbolic plane of Gaussian curvature `k < 0` on a half-plane chart:
/// `e1 = √(−k) v ∂u`, `e2 = √(−k) v ∂v`.
pub fn hyperbolic(k: f64) -> Result<ZooEntry> {
    let m = hyperbolic_chart("h2", k, "u", "v")?;
    Ok(ZooEntry {
        id: "h2".into(),
        geometry: Geometry::Chart(m),
        default_split: None,
        expected: vec![Expected::new(
            "S",
            2.0 * k,
            Provenance::Derived,
            "twice the Gaussian curvature",
        )],
    })
}

fn hyperbolic_scale(k: f64) -> Result<f64> {
    if !(k < 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "hyperbolic curvature must be negative, got {k}"
        )));
    }
    Ok((-k).sqrt())
}

fn hyperbolic_chart(name: &str, k: f64, u: &str, v: &str) -> Result<ChartManifold> {
    let a = hyperbolic_scale(k)?;
    let comp = format!("{a:?}*{v}");
    ChartManifold::parse(
        name,
        &[u, v],
        &[vec![comp.clone(), "0".into()], vec!["0".into(), comp]],
        vec![iv(-1.0, 1.0), iv(0.25, 2.0)],
    )
}

/// Heisenberg group: `e1 = ∂x`, `e2 = ∂y + x ∂z`, `e3 = ∂z`, so `[e1, e2] = e3`.
pub fn nil3() -> ZooEntry {
    let m = ChartManifold::parse(
        "nil3",
        &["x", "y", "z"],
        &rows(&[&["1", "0", "0"], &["0", "1", "x"], &["0", "0", "1"]]),
        vec![iv(-1.0, 1.0); 3],
    )
    .expect("static chart");
    ZooEntry {
        id: "nil3".into(),
        geometry: Geometry::Chart(m),
        default_split: Some(SplitSpec::with_rank(3, 2).expect("static split")),
        expected: vec![Expected::new("S", -0.5, Provenance::Derived, "−¼ Σ c² for one bracket")],
    }
}

/// `N × S² × H` with `N` the mapping torus chart `(t, x1, x2)`, `S²` the
/// unit sphere `(p, q)` and `H` a hyperbolic chart `(u, v)` of Gaussian
/// curvature `k_h`.
///
/// Frame vectors keep their natural labels `e1..e7` but are stored in the
/// order `e2, e3, e6, e7 | e1, e4, e5` so that the collapsed block
/// `{e1, e4, e5}` comes last.
pub fn seven_manifold(k_h: f64) -> Result<ZooEntry> {
    let a = hyperbolic_scale(k_h)?;
    let hv = format!("{a:?}*v");
    let z = "0";
    let row = |entries: &[(usize, &str)]| -> Vec<String> {
        let mut r = vec![z.to_string(); 7];
        for (i, s) in entries {
            r[*i] = s.to_string();
        }
        r
    };
    // coordinates: t x1 x2 p q u v
    let frame = vec![
        row(&[(1, "1")]),                // e2 = ∂x1
        row(&[(1, "t"), (2, "1")]),      // e3 = t∂x1 + ∂x2
        row(&[(5, &hv)]),                // e6
        row(&[(6, &hv)]),                // e7
        row(&[(0, "1")]),                // e1 = ∂t
        row(&[(3, "1")]),                // e4 = ∂p
        row(&[(4, "csc(p)")]),           // e5 = csc p ∂q
    ];
    let bx = vec![
        iv(-2.0, 2.0),
        iv(-1.0, 1.0),
        iv(-1.0, 1.0),
        iv(0.2, PI - 0.2),
        iv(0.2, 2.0 * PI - 0.2),
        iv(-1.0, 1.0),
        iv(0.25, 2.0),
    ];
    let m = ChartManifold::parse("seven", &["t", "x1", "x2", "p", "q", "u", "v"], &frame, bx)?
        .with_labels(labels(&["e2", "e3", "e6", "e7", "e1", "e4", "e5"]))?;
    Ok(ZooEntry {
        id: "seven".into(),
        geometry: Geometry::Chart(m),
        default_split: Some(SplitSpec::with_rank(7, 4)?),
        expected: vec![
            Expected::new("S2", 2.0, Provenance::Published, "leaf R × S²"),
            Expected::new("npb", 1.5, Provenance::Published, "2 − 1/2"),
            Expected::new("q4", 0.0, Provenance::Published, "involutive"),
            Expected::new("q2", 1.5, Provenance::Published, ""),
            Expected::new("qm2", 0.0, Provenance::Published, ""),
            Expected::new(
                "q0",
                2.0 * k_h,
                Provenance::Derived,
                "scalar curvature of the hyperbolic factor",
            ),
            Expected::new("S", -0.5 + 2.0 + 2.0 * k_h, Provenance::Derived, "N + S² + H"),
            Expected::new("c[e2][e1,e3]", 1.0, Provenance::Published, "[e1, e3] = e2"),
        ],
    })
}

/// Constants-only entry for a Lie group with a left-invariant orthonormal frame.
pub fn lie_group(constants: StructureTensor, name: &str) -> Result<ZooEntry> {
    let n = constants.dim();
    let lie = LieFrame::new(format!("lie:{name}"), constants)?;
    let s = crate::curvature::scalar_curvature_lie(&lie.constants);
    Ok(ZooEntry {
        id: format!("lie:{name}"),
        geometry: Geometry::Lie(lie),
        default_split: if n >= 2 { Some(SplitSpec::with_rank(n, 1)?) } else { None },
        expected: vec![Expected::new("S", s, Provenance::Derived, "constant formula")],
    })
}

/// `lie:su2`, `lie:abelian3`, `lie:heisenberg`.
pub fn lie_fixture(name: &str) -> Result<ZooEntry> {
    let (constants, s, provenance) = match name {
        "su2" => (su2_constants(), 6.0, Provenance::Published),
        "abelian3" => (StructureTensor::zeros(3), 0.0, Provenance::Trivial),
        "heisenberg" => (
            StructureTensor::from_entries(3, &[(2, 0, 1, 1.0)])?,
            -0.5,
            Provenance::Derived,
        ),
        other => {
            return Err(Error::InvalidArgument(format!("unknown Lie fixture `{other}`")));
        }
    };
    let mut entry = lie_group(constants, name)?;
    entry.expected = vec![Expected::new("S", s, provenance, "")];
    if name == "su2" {
        entry.expected.extend(s3_expected().into_iter().skip(1));
    }
    Ok(entry)
}

/// Resolves a fixture id. `k` overrides the hyperbolic curvature of `h2`
/// and `seven`.
pub fn lookup(id: &str, k: Option<f64>) -> Result<ZooEntry> {
    if let Some(name) = id.strip_prefix("lie:") {
        return lie_fixture(name);
    }
    if let Some(n) = id.strip_prefix("flat") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown fixture `{id}`")))?;
        return flat(n);
    }
    match id {
        "s2" => Ok(sphere2()),
        "s3" => Ok(sphere3()),
        "h2" => hyperbolic(k.unwrap_or(DEFAULT_K_H)),
        "nil3" => Ok(nil3()),
        "seven" => seven_manifold(k.unwrap_or(DEFAULT_K_H)),
        _ => Err(Error::InvalidArgument(format!("unknown fixture `{id}`"))),
    }
}

/// Ids accepted by [`lookup`] (flat entries listed for n = 2 and 7).
pub const IDS: [&str; 10] = [
    "flat2",
    "flat7",
    "s2",
    "s3",
    "h2",
    "nil3",
    "seven",
    "lie:su2",
    "lie:abelian3",
    "lie:heisenberg",
];

/// Every fixture in [`IDS`] with default parameters.
pub fn all() -> Vec<ZooEntry> {
    IDS.iter()
        .map(|id| lookup(id, None).expect("built-in fixture"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_ids() {
        for entry in all() {
            assert_eq!(lookup(&entry.id, None).unwrap(), entry);
        }
        assert!(lookup("flat9", None).is_err());
        assert!(lookup("torus", None).is_err());
        assert!(lookup("lie:so3", None).is_err());
        assert!(seven_manifold(1.0).is_err());
    }

    #[test]
    fn expected_values_are_tagged() {
        for entry in all() {
            assert!(entry.expected("S").is_some() || entry.id == "seven", "{}", entry.id);
        }
        let seven = lookup("seven", Some(-2.0)).unwrap();
        assert_eq!(seven.expected("q0").unwrap().value, -4.0);
        assert_eq!(seven.expected("q0").unwrap().provenance, Provenance::Derived);
    }

    #[test]
    fn seven_frame_order() {
        let e = seven_manifold(DEFAULT_K_H).unwrap();
        let m = e.chart().unwrap();
        assert_eq!(m.labels()[4], "e1");
        assert_eq!(m.frame()[2][5].to_string(), "2.0 * v");
    }
}
