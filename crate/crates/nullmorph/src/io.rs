//! File formats.
//!
//! Every complex number serializes as a two-element array `[re, im]` of
//! IEEE-754 doubles; serde_json renders doubles with the shortest
//! representation that round-trips bit-exactly, so serialized objects
//! re-parse to equal values.
//!
//! Schemas:
//! - curve: `{"base": 2x2, "lambda": [[pair,pair],...], "pi": [...]}`
//!   (polynomial coefficients of the two spinor factors);
//! - twistor jet: `{"at": pair, "order": K, "z": [[pair x K+1] x 4]}`;
//! - correspondence points: `{"x": 2x2, "pi": [pair,pair]}` and
//!   `{"x": 2x2, "v": 2x2}`;
//! - endomorphisms: tagged by `"kind"`: `degree1` (4x4 matrix), `degree2`
//!   (two + two symmetric 4x4 matrices), `invariant` (eight tensors).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{FPoint, GPoint, NullCurve, SpinorPoly};
use crate::endo::{Degree1Map, Degree2Map, InvariantCausalMap, Tensor3};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::spinor::{C64, Priming, SpacetimePoint, Spinor, Variance};
use crate::twistor::TwistorJet;

pub type CPair = [f64; 2];
pub type Mat2Json = [[CPair; 2]; 2];

pub fn c_to_pair(c: C64) -> CPair {
    [c.re, c.im]
}

pub fn pair_to_c(p: CPair) -> Result<C64> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(Error::NonFinite("complex value in input file"));
    }
    Ok(C64::new(p[0], p[1]))
}

pub fn mat_to_json(m: &SpacetimePoint) -> Mat2Json {
    [
        [c_to_pair(m.m[0][0]), c_to_pair(m.m[0][1])],
        [c_to_pair(m.m[1][0]), c_to_pair(m.m[1][1])],
    ]
}

pub fn mat_from_json(j: &Mat2Json) -> Result<SpacetimePoint> {
    Ok(SpacetimePoint::new([
        [pair_to_c(j[0][0])?, pair_to_c(j[0][1])?],
        [pair_to_c(j[1][0])?, pair_to_c(j[1][1])?],
    ]))
}

fn spinor_pair_to_json(v: [C64; 2]) -> [CPair; 2] {
    [c_to_pair(v[0]), c_to_pair(v[1])]
}

fn spinor_pair_from_json(j: &[CPair; 2]) -> Result<[C64; 2]> {
    Ok([pair_to_c(j[0])?, pair_to_c(j[1])?])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveJson {
    pub base: Mat2Json,
    pub lambda: Vec<[CPair; 2]>,
    pub pi: Vec<[CPair; 2]>,
}

impl CurveJson {
    pub fn from_curve(c: &NullCurve) -> Self {
        Self {
            base: mat_to_json(c.base()),
            lambda: c.lambda_poly().coeffs.iter().map(|v| spinor_pair_to_json(*v)).collect(),
            pi: c.pi_poly().coeffs.iter().map(|v| spinor_pair_to_json(*v)).collect(),
        }
    }

    pub fn to_curve(&self) -> Result<NullCurve> {
        if self.lambda.is_empty() || self.pi.is_empty() {
            return Err(Error::Parse("curve needs at least one coefficient per factor".into()));
        }
        let lam = SpinorPoly::new(
            self.lambda.iter().map(spinor_pair_from_json).collect::<Result<Vec<_>>>()?,
        );
        let pi = SpinorPoly::new(
            self.pi.iter().map(spinor_pair_from_json).collect::<Result<Vec<_>>>()?,
        );
        NullCurve::new(mat_from_json(&self.base)?, lam, pi)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistorJetJson {
    pub at: CPair,
    pub order: usize,
    pub z: [Vec<CPair>; 4],
}

impl TwistorJetJson {
    pub fn from_jet(at: C64, jet: &TwistorJet) -> Self {
        let comp = |k: usize| jet.z[k].coeffs().iter().map(|c| c_to_pair(*c)).collect();
        Self { at: c_to_pair(at), order: jet.order(), z: [comp(0), comp(1), comp(2), comp(3)] }
    }

    pub fn to_jet(&self) -> Result<(C64, TwistorJet)> {
        let mut comps = Vec::with_capacity(4);
        for zc in &self.z {
            if zc.len() != self.order + 1 {
                return Err(Error::Parse("jet component length must be order + 1".into()));
            }
            let coeffs = zc.iter().map(|p| pair_to_c(*p)).collect::<Result<Vec<_>>>()?;
            comps.push(Jet::new(coeffs));
        }
        let z3 = comps.pop().unwrap();
        let z2 = comps.pop().unwrap();
        let z1 = comps.pop().unwrap();
        let z0 = comps.pop().unwrap();
        Ok((pair_to_c(self.at)?, TwistorJet { z: [z0, z1, z2, z3] }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FPointJson {
    pub x: Mat2Json,
    pub pi: [CPair; 2],
}

impl FPointJson {
    pub fn from_point(p: &FPoint) -> Self {
        Self { x: mat_to_json(&p.x), pi: spinor_pair_to_json(p.pi_components()) }
    }

    pub fn to_point(&self) -> Result<FPoint> {
        let pi = spinor_pair_from_json(&self.pi)?;
        FPoint::new(
            mat_from_json(&self.x)?,
            Spinor::from_components(pi, Variance::Lower, Priming::Primed),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GPointJson {
    pub x: Mat2Json,
    pub v: Mat2Json,
}

impl GPointJson {
    pub fn from_point(p: &GPoint) -> Self {
        Self { x: mat_to_json(&p.x), v: mat_to_json(p.v.matrix()) }
    }

    pub fn to_point(&self) -> Result<GPoint> {
        GPoint::new(mat_from_json(&self.x)?, mat_from_json(&self.v)?)
    }
}

pub type Mat4Json = [[CPair; 4]; 4];
pub type Tensor3Json = [[[CPair; 2]; 2]; 2];

fn mat4_to_json(m: &[[C64; 4]; 4]) -> Mat4Json {
    let mut out = [[[0.0; 2]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = c_to_pair(m[i][j]);
        }
    }
    out
}

fn mat4_from_json(j: &Mat4Json) -> Result<[[C64; 4]; 4]> {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for jj in 0..4 {
            out[i][jj] = pair_to_c(j[i][jj])?;
        }
    }
    Ok(out)
}

fn tensor3_to_json(t: &Tensor3) -> Tensor3Json {
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                out[i][j][k] = c_to_pair(t[i][j][k]);
            }
        }
    }
    out
}

fn tensor3_from_json(j: &Tensor3Json) -> Result<Tensor3> {
    let mut out = [[[C64::new(0.0, 0.0); 2]; 2]; 2];
    for i in 0..2 {
        for jj in 0..2 {
            for k in 0..2 {
                out[i][jj][k] = pair_to_c(j[i][jj][k])?;
            }
        }
    }
    Ok(out)
}

/// Self-dual endomorphism file, tagged by kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapJson {
    Degree1 { matrix: Mat4Json },
    Degree2 { f: [Mat4Json; 2], g: [Mat4Json; 2] },
}

impl MapJson {
    pub fn from_map(map: &crate::endo::ProjectiveMap) -> Self {
        match map {
            crate::endo::ProjectiveMap::Degree1(m) => MapJson::Degree1 { matrix: mat4_to_json(&m.f) },
            crate::endo::ProjectiveMap::Degree2(m) => MapJson::Degree2 {
                f: [mat4_to_json(&m.f[0]), mat4_to_json(&m.f[1])],
                g: [mat4_to_json(&m.g[0]), mat4_to_json(&m.g[1])],
            },
        }
    }

    pub fn to_map(&self) -> Result<crate::endo::ProjectiveMap> {
        match self {
            MapJson::Degree1 { matrix } => Ok(crate::endo::ProjectiveMap::Degree1(
                Degree1Map::new(mat4_from_json(matrix)?)?,
            )),
            MapJson::Degree2 { f, g } => Ok(crate::endo::ProjectiveMap::Degree2(Degree2Map::new(
                [mat4_from_json(&f[0])?, mat4_from_json(&f[1])?],
                [mat4_from_json(&g[0])?, mat4_from_json(&g[1])?],
            )?)),
        }
    }
}

/// Invariant two-slot endomorphism file: eight tensors named as indexed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CausalMapJson {
    pub a: Tensor3Json,
    pub b: [CPair; 2],
    pub c: Tensor3Json,
    pub d: [CPair; 2],
    pub e: Tensor3Json,
    pub f: [CPair; 2],
    pub g: Tensor3Json,
    pub h: [CPair; 2],
}

impl CausalMapJson {
    pub fn from_map(m: &InvariantCausalMap) -> Self {
        Self {
            a: tensor3_to_json(&m.a),
            b: spinor_pair_to_json(m.b),
            c: tensor3_to_json(&m.c),
            d: spinor_pair_to_json(m.d),
            e: tensor3_to_json(&m.e),
            f: spinor_pair_to_json(m.f),
            g: tensor3_to_json(&m.g),
            h: spinor_pair_to_json(m.h),
        }
    }

    pub fn to_map(&self) -> Result<InvariantCausalMap> {
        InvariantCausalMap::new(
            tensor3_from_json(&self.a)?,
            spinor_pair_from_json(&self.b)?,
            tensor3_from_json(&self.c)?,
            spinor_pair_from_json(&self.d)?,
            tensor3_from_json(&self.e)?,
            spinor_pair_from_json(&self.f)?,
            tensor3_from_json(&self.g)?,
            spinor_pair_from_json(&self.h)?,
        )
    }
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Io(format!("serialization: {e}")))?;
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// CSV for sampled matrix curves: `s_re, s_im`, then the four complex
/// entries of the point row by row as re/im column pairs.
pub fn write_curve_csv(path: &Path, samples: &[(C64, SpacetimePoint)]) -> Result<()> {
    let mut out = String::from(
        "s_re,s_im,m00_re,m00_im,m01_re,m01_im,m10_re,m10_im,m11_re,m11_im\n",
    );
    for (s, m) in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            s.re,
            s.im,
            m.m[0][0].re,
            m.m[0][0].im,
            m.m[0][1].re,
            m.m[0][1].im,
            m.m[1][0].re,
            m.m[1][0].im,
            m.m[1][1].re,
            m.m[1][1].im,
        ));
    }
    fs::write(path, out).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{random_null_curve, DegreeBounds};
    use crate::endo::random_map;

    #[test]
    fn curve_json_round_trip_is_bit_exact() {
        let curve = random_null_curve(3, DegreeBounds::default()).unwrap();
        let json = CurveJson::from_curve(&curve);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: CurveJson = serde_json::from_str(&text).unwrap();
        let back = parsed.to_curve().unwrap();
        assert_eq!(curve, back);
    }

    #[test]
    fn map_json_round_trip() {
        for kind in ["degree1", "degree2"] {
            let map = random_map(kind, 8).unwrap();
            let json = MapJson::from_map(&map);
            let text = serde_json::to_string(&json).unwrap();
            let parsed: MapJson = serde_json::from_str(&text).unwrap();
            assert_eq!(parsed.to_map().unwrap(), map);
        }
    }

    #[test]
    fn nonfinite_input_is_rejected() {
        let bad = FPointJson {
            x: [[[f64::NAN, 0.0]; 2]; 2],
            pi: [[1.0, 0.0], [0.0, 0.0]],
        };
        assert!(matches!(bad.to_point(), Err(Error::NonFinite(_))));
    }
}
