//! Hyperplane arrangements, PL γ-stratifications and barcode sheaves in ℝⁿ.

mod sheaf;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::Rat;
use crate::gamma_geometry::{
    dot, is_gamma_locally_closed, omega_to_z, subset_of_union, Cone, HPolyhedron, HalfSpace, Vector,
};

pub use sheaf::{hom_dim_nd, hom_space_nd, pullback_linear, tensor_nd, BarcodeSheafND, HomSpaceND, Piece, Pullback};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "crate::gamma_geometry::rat_vec")]
    pub normal: Vector,
    #[serde(with = "crate::gamma_geometry::rat_str")]
    pub offset: Rat,
}

/// Finite family of affine hyperplanes `⟨n,x⟩ = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<(Vector, Rat)>) -> Result<Arrangement> {
        let mut hs = Vec::new();
        for (i, (n, b)) in hyperplanes.into_iter().enumerate() {
            if n.len() != dim {
                return Err(Error::Shape(format!("hyperplane {i} has the wrong dimension")));
            }
            if n.iter().all(Zero::is_zero) {
                return Err(Error::Invalid(format!("hyperplane {i} has a zero normal")));
            }
            hs.push(Hyperplane { normal: n, offset: b });
        }
        Ok(Arrangement { dim, hyperplanes: hs })
    }

    /// Every normal lies in `γ° ∪ γ°ᵃ`; otherwise the first offending index.
    pub fn check_compatible(&self, c: &Cone) -> Result<()> {
        for (i, h) in self.hyperplanes.iter().enumerate() {
            let signs: Vec<Rat> = c.rays().iter().map(|r| dot(&h.normal, r)).collect();
            let pos = signs.iter().any(Signed::is_positive);
            let neg = signs.iter().any(Signed::is_negative);
            if pos && neg {
                return Err(Error::IncompatibleHyperplane {
                    index: i,
                    reason: "normal lies in neither the polar cone nor its antipode".into(),
                });
            }
        }
        Ok(())
    }

    fn side(&self, j: usize, sign: i8) -> HalfSpace {
        let h = &self.hyperplanes[j];
        match sign {
            -1 => HalfSpace { normal: h.normal.clone(), offset: h.offset.clone(), strict: true },
            1 => HalfSpace { normal: h.normal.iter().map(|v| -v).collect(), offset: -h.offset.clone(), strict: true },
            _ => unreachable!(),
        }
    }
}

fn dfs(arr: &Arrangement, j: usize, cur: HPolyhedron, with_faces: bool, out: &mut Vec<HPolyhedron>) {
    if cur.is_empty() {
        return;
    }
    if j == arr.hyperplanes.len() {
        out.push(cur.canonicalize());
        return;
    }
    for s in [-1i8, 0, 1] {
        let next = if s == 0 {
            if !with_faces {
                continue;
            }
            let h = &arr.hyperplanes[j];
            cur.with(HalfSpace::weak(h.normal.clone(), h.offset.clone()))
                .with(HalfSpace::weak(h.normal.iter().map(|v| -v).collect(), -h.offset.clone()))
        } else {
            cur.with(arr.side(j, s))
        };
        dfs(arr, j + 1, next, with_faces, out);
    }
}

/// Non-empty open cells of the arrangement inside `region`.
pub fn enumerate_cells(arr: &Arrangement, region: &HPolyhedron) -> Vec<HPolyhedron> {
    let mut out = Vec::new();
    dfs(arr, 0, region.clone(), false, &mut out);
    out
}

/// All non-empty relatively open faces (sign vectors in {-,0,+}) inside `region`.
pub fn enumerate_faces(arr: &Arrangement, region: &HPolyhedron) -> Vec<HPolyhedron> {
    let mut out = Vec::new();
    dfs(arr, 0, region.clone(), true, &mut out);
    out
}

/// Exhaustion by boxes `⟨h_j, x⟩ = k⟨h_j, v⟩`, `|k| ≤ n`, for unbounded supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boxing {
    /// A point of `Int γ`; the sum of the cone rays when absent.
    #[serde(default, with = "opt_rat_vec")]
    pub v: Option<Vector>,
    pub n: u32,
}

/// Input of the stratification algorithm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PLGammaSheafSpec {
    pub arrangement: Arrangement,
    pub support: Vec<HPolyhedron>,
    pub cone: Cone,
    #[serde(default)]
    pub boxing: Option<Boxing>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stratification {
    pub strata: Vec<HPolyhedron>,
}

pub fn stratify(spec: &PLGammaSheafSpec) -> Result<Stratification> {
    let c = &spec.cone;
    let dim = spec.arrangement.dim;
    if c.dim() != dim || spec.support.iter().any(|p| p.dim != dim) {
        return Err(Error::Shape("arrangement, support and cone dimensions differ".into()));
    }
    c.require_proper_solid()?;
    spec.arrangement.check_compatible(c)?;
    let support: Vec<HPolyhedron> =
        spec.support.iter().filter(|p| !p.is_empty()).map(HPolyhedron::canonicalize).collect();
    for (i, p) in support.iter().enumerate() {
        if p.closure() != *p {
            return Err(Error::Invalid(format!("support piece {i} is not closed")));
        }
    }
    if support.is_empty() {
        return Ok(Stratification { strata: Vec::new() });
    }
    let mut arr = spec.arrangement.clone();
    for p in &support {
        for h in &p.constraints {
            arr.hyperplanes.push(Hyperplane { normal: h.normal.clone(), offset: h.offset.clone() });
        }
    }
    if let Some(b) = &spec.boxing {
        let v = b.v.clone().unwrap_or_else(|| c.ray_sum());
        if v.len() != dim || !c.interior().contains_point(&v) {
            return Err(Error::Invalid("boxing direction must lie in the interior of the cone".into()));
        }
        for h in c.normals() {
            let hv = dot(h, &v);
            for k in -(b.n as i64)..=(b.n as i64) {
                arr.hyperplanes.push(Hyperplane { normal: h.clone(), offset: Rat::from_integer(k.into()) * &hv });
            }
        }
    }
    arr.hyperplanes.dedup();
    arr.check_compatible(c)?;
    let mut strata = Vec::new();
    for cell in enumerate_cells(&arr, &HPolyhedron::universe(dim)) {
        if support.iter().any(|p| p.contains(&cell)) {
            strata.push(omega_to_z(&cell, c)?);
        }
    }
    Ok(Stratification { strata })
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

pub fn validate_stratification(s: &Stratification, target: &[HPolyhedron], c: &Cone) -> ValidationReport {
    let mut d = Vec::new();
    for (i, z) in s.strata.iter().enumerate() {
        if z.is_empty() {
            d.push(format!("stratum {i} is empty"));
        } else if !is_gamma_locally_closed(z, c) {
            d.push(format!("stratum {i} is not gamma-locally closed"));
        }
    }
    for i in 0..s.strata.len() {
        for j in i + 1..s.strata.len() {
            if !s.strata[i].intersect(&s.strata[j]).is_empty() {
                d.push(format!("strata {i} and {j} intersect"));
            }
        }
    }
    let closures: Vec<HPolyhedron> = s.strata.iter().map(HPolyhedron::closure).collect();
    for (i, z) in closures.iter().enumerate() {
        if !subset_of_union(z, target) {
            d.push(format!("closure of stratum {i} leaves the support"));
        }
    }
    for (i, t) in target.iter().enumerate() {
        if !subset_of_union(t, &closures) {
            d.push(format!("support piece {i} is not covered"));
        }
    }
    ValidationReport { ok: d.is_empty(), diagnostics: d }
}

mod opt_rat_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::foundations::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(|r| r.to_string())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rat>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| v.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{rat, rat_int};
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vector {
        x.iter().map(|&k| rat_int(k)).collect()
    }

    fn arr(rows: &[(&[i64], i64)]) -> Arrangement {
        Arrangement::new(rows[0].0.len(), rows.iter().map(|(n, b)| (v(n), rat_int(*b))).collect()).unwrap()
    }

    fn unit_square() -> Arrangement {
        arr(&[(&[1, 0], 0), (&[1, 0], 1), (&[0, 1], 0), (&[0, 1], 1)])
    }

    fn sq(lc: bool, hc: bool) -> HPolyhedron {
        HPolyhedron::box_from(&vec![(rat_int(0), lc, rat_int(1), hc); 2])
    }

    #[test]
    fn cell_counts() {
        assert_eq!(enumerate_cells(&arr(&[(&[1, 0], 0)]), &HPolyhedron::universe(2)).len(), 2);
        assert_eq!(enumerate_cells(&arr(&[(&[1, 0], 0), (&[1, 0], 1)]), &HPolyhedron::universe(2)).len(), 3);
        let cells = enumerate_cells(&unit_square(), &sq(true, true));
        assert_eq!(cells, vec![sq(false, false)]);
        assert_eq!(enumerate_faces(&unit_square(), &sq(true, true)).len(), 9);
        assert_eq!(enumerate_faces(&unit_square(), &HPolyhedron::universe(2)).len(), 25);
    }

    #[test]
    fn stratify_examples() {
        let q = Cone::negative_orthant(2);
        let half = HPolyhedron::new(2, vec![HalfSpace::weak(v(&[-1, 0]), rat_int(0))]).unwrap();
        let spec = PLGammaSheafSpec { arrangement: arr(&[(&[1, 0], 0)]), support: vec![half.clone()], cone: q.clone(), boxing: None };
        let s = stratify(&spec).unwrap();
        assert_eq!(s.strata, vec![half.clone()]);
        assert!(validate_stratification(&s, &[half], &q).ok);

        let spec = PLGammaSheafSpec { arrangement: unit_square(), support: vec![sq(true, true)], cone: q.clone(), boxing: None };
        let s = stratify(&spec).unwrap();
        assert_eq!(s.strata, vec![sq(true, false)]);
        assert!(validate_stratification(&s, &[sq(true, true)], &q).ok);

        let spec = PLGammaSheafSpec { arrangement: unit_square(), support: vec![], cone: q.clone(), boxing: None };
        assert!(stratify(&spec).unwrap().strata.is_empty());
    }

    #[test]
    fn incompatible_hyperplane_named() {
        let q = Cone::negative_orthant(2);
        let spec = PLGammaSheafSpec {
            arrangement: arr(&[(&[1, 0], 0), (&[1, -1], 0)]),
            support: vec![sq(true, true)],
            cone: q,
            boxing: None,
        };
        match stratify(&spec) {
            Err(Error::IncompatibleHyperplane { index, .. }) => assert_eq!(index, 1),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn validation_failures() {
        let q = Cone::negative_orthant(2);
        let twice = Stratification { strata: vec![sq(true, false), sq(true, false)] };
        let r = validate_stratification(&twice, &[sq(true, true)], &q);
        assert!(!r.ok && r.diagnostics.iter().any(|d| d.contains("intersect")));
        let open = Stratification { strata: vec![sq(false, false)] };
        let r = validate_stratification(&open, &[sq(true, true)], &q);
        assert_eq!(r.diagnostics, vec!["stratum 0 is not gamma-locally closed".to_string()]);
        let seg = HPolyhedron::box_from(&[(rat_int(0), false, rat_int(1), false), (rat_int(0), true, rat_int(0), true)]);
        let r = validate_stratification(&Stratification { strata: vec![seg] }, &[sq(true, true)], &q);
        assert!(r.diagnostics.iter().any(|d| d.contains("locally closed")));
    }

    #[test]
    fn boxing_splits_unbounded_support() {
        let q = Cone::negative_orthant(2);
        let quadrant = q.antipodal().as_polyhedron();
        let spec = PLGammaSheafSpec {
            arrangement: Arrangement { dim: 2, hyperplanes: vec![] },
            support: vec![quadrant.clone()],
            cone: q.clone(),
            boxing: Some(Boxing { v: None, n: 2 }),
        };
        let s = stratify(&spec).unwrap();
        assert_eq!(s.strata.len(), 9);
        assert!(validate_stratification(&s, &[quadrant], &q).ok);
        let bad = PLGammaSheafSpec { boxing: Some(Boxing { v: Some(v(&[1, 1])), n: 1 }), ..spec };
        assert!(stratify(&bad).is_err());
    }

    fn arb_spec() -> impl Strategy<Value = (Arrangement, HPolyhedron)> {
        let hp = (prop::sample::select(vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[1, 2]), v(&[2, 1])]), -2i64..3);
        (prop::collection::vec(hp, 0..4), -2i64..1, -2i64..1, 1i64..3, 1i64..3).prop_map(|(hs, a, b, w, h)| {
            let arr = Arrangement::new(2, hs.into_iter().map(|(n, k)| (n, rat(k, 2))).collect()).unwrap();
            let b = HPolyhedron::box_from(&[(rat_int(a), true, rat_int(a + w), true), (rat_int(b), true, rat_int(b + h), true)]);
            (arr, b)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn stratify_always_valid((arr, support) in arb_spec()) {
            let q = Cone::negative_orthant(2);
            let spec = PLGammaSheafSpec { arrangement: arr.clone(), support: vec![support.clone()], cone: q.clone(), boxing: None };
            let s = stratify(&spec).unwrap();
            let r = validate_stratification(&s, &[support.clone()], &q);
            prop_assert!(r.ok, "{:?}", r.diagnostics);
            // every stratum's interior is a cell of the refined arrangement
            for z in &s.strata {
                let int = z.interior();
                prop_assert_eq!(omega_to_z(&int, &q).unwrap(), z.clone());
            }
            // points of the support off the strata are on the upper boundary
            for x in -6..=6 {
                for y in -6..=6 {
                    let p = vec![rat(x, 2), rat(y, 2)];
                    if support.contains_point(&p) && !s.strata.iter().any(|z| z.contains_point(&p)) {
                        let nudged = vec![&p[0] - rat(1, 100), &p[1] - rat(1, 100)];
                        prop_assert!(!support.interior().contains_point(&p) || s.strata.iter().any(|z| z.contains_point(&nudged)));
                    }
                }
            }
        }
    }
}
