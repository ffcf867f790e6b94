use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_geometry::{is_gamma_locally_closed, Cone, HPolyhedron, Vector};

/// `mult` copies of `k_set[-degree]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub set: HPolyhedron,
    pub multiplicity: usize,
    pub degree: i32,
}

/// A direct sum of constant sheaves on γ-locally closed convex polytopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeSheafND {
    pub dim: usize,
    pub pieces: Vec<Piece>,
}

impl BarcodeSheafND {
    pub fn new(dim: usize, pieces: Vec<Piece>, c: &Cone) -> Result<BarcodeSheafND> {
        for (i, p) in pieces.iter().enumerate() {
            if p.set.dim != dim {
                return Err(Error::Shape(format!("piece {i} has the wrong dimension")));
            }
            if p.set.is_empty() || !is_gamma_locally_closed(&p.set, c) {
                return Err(Error::Invalid(format!("piece {i} is not a non-empty gamma-locally closed set")));
            }
        }
        Ok(BarcodeSheafND::unchecked(dim, pieces))
    }

    /// Skips the γ check; empty pieces and zero multiplicities are dropped.
    pub fn unchecked(dim: usize, pieces: Vec<Piece>) -> BarcodeSheafND {
        let mut out: Vec<Piece> = Vec::new();
        for p in pieces {
            if p.multiplicity == 0 || p.set.is_empty() {
                continue;
            }
            let set = p.set.canonicalize();
            match out.iter_mut().find(|q| q.degree == p.degree && q.set == set) {
                Some(q) => q.multiplicity += p.multiplicity,
                None => out.push(Piece { set, ..p }),
            }
        }
        BarcodeSheafND { dim, pieces: out }
    }

    pub fn single(set: HPolyhedron) -> BarcodeSheafND {
        BarcodeSheafND::unchecked(set.dim, vec![Piece { set, multiplicity: 1, degree: 0 }])
    }

    /// Total stalk dimension in each degree at `x`.
    pub fn stalk(&self, x: &[crate::foundations::Rat]) -> std::collections::BTreeMap<i32, usize> {
        let mut m = std::collections::BTreeMap::new();
        for p in self.pieces.iter().filter(|p| p.set.contains_point(x)) {
            *m.entry(p.degree).or_insert(0) += p.multiplicity;
        }
        m
    }

    /// Equality of the multisets of pieces.
    pub fn same_as(&self, o: &BarcodeSheafND) -> bool {
        let covers = |a: &BarcodeSheafND, b: &BarcodeSheafND| {
            a.pieces.iter().all(|p| b.pieces.iter().any(|q| q.degree == p.degree && q.set == p.set && q.multiplicity == p.multiplicity))
        };
        self.dim == o.dim && self.pieces.len() == o.pieces.len() && covers(self, o) && covers(o, self)
    }
}

/// `dim Hom(k_S, k_T)`: 1 iff `S∩T` is non-empty, closed in `S` and open in `T`.
pub fn hom_dim_nd(s: &HPolyhedron, t: &HPolyhedron) -> Result<usize> {
    if s.dim != t.dim {
        return Err(Error::Shape("polytopes live in different dimensions".into()));
    }
    let st = s.intersect(t);
    if st.is_empty() {
        return Ok(0);
    }
    if !t.contains(&s.intersect(&st.closure())) {
        return Ok(0);
    }
    // T∖S is the union of T ∩ ¬c over the constraints c of S; it must stay away from S∩T.
    for c in &s.constraints {
        let off = t.with(c.negate());
        if !off.is_empty() && !st.intersect(&off.closure()).is_empty() {
            return Ok(0);
        }
    }
    Ok(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomSpaceND {
    pub dim: usize,
    /// `(source piece, copy, target piece, copy)` for each basis vector.
    pub basis: Vec<(usize, usize, usize, usize)>,
}

/// Degree-zero morphisms between barcode sheaves.
pub fn hom_space_nd(a: &BarcodeSheafND, b: &BarcodeSheafND) -> Result<HomSpaceND> {
    let mut basis = Vec::new();
    for (i, p) in a.pieces.iter().enumerate() {
        for (j, q) in b.pieces.iter().enumerate() {
            if p.degree != q.degree || hom_dim_nd(&p.set, &q.set)? == 0 {
                continue;
            }
            for u in 0..p.multiplicity {
                for v in 0..q.multiplicity {
                    basis.push((i, u, j, v));
                }
            }
        }
    }
    Ok(HomSpaceND { dim: basis.len(), basis })
}

/// `k_S ⊗ k_T = k_{S∩T}`, extended bilinearly.
pub fn tensor_nd(a: &BarcodeSheafND, b: &BarcodeSheafND) -> Result<BarcodeSheafND> {
    if a.dim != b.dim {
        return Err(Error::Shape("sheaves live in different dimensions".into()));
    }
    let mut pieces = Vec::new();
    for p in &a.pieces {
        for q in &b.pieces {
            pieces.push(Piece {
                set: p.set.intersect(&q.set),
                multiplicity: p.multiplicity * q.multiplicity,
                degree: p.degree + q.degree,
            });
        }
    }
    Ok(BarcodeSheafND::unchecked(a.dim, pieces))
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub sheaf: BarcodeSheafND,
    /// The map sends the source cone into the target cone, so the result is again a γ-sheaf.
    pub gamma_compatible: bool,
}

/// `f⁻¹` along `x ↦ M x`, `M` given by rows.
pub fn pullback_linear(m: &[Vector], b: &BarcodeSheafND, source: &Cone, target: &Cone) -> Result<Pullback> {
    if m.len() != b.dim || target.dim() != b.dim {
        return Err(Error::Shape("map rows must match the target dimension".into()));
    }
    let n = source.dim();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("map columns must match the source dimension".into()));
    }
    let mut pieces = Vec::new();
    for p in &b.pieces {
        pieces.push(Piece { set: p.set.preimage(m)?, ..p.clone() });
    }
    let gamma_compatible = source.rays().iter().all(|r| {
        let img: Vector = m.iter().map(|row| crate::gamma_geometry::dot(row, r)).collect();
        target.contains_point(&img)
    });
    Ok(Pullback { sheaf: BarcodeSheafND::unchecked(n, pieces), gamma_compatible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcodes1d::{hom_dim, tests::arb_interval};
    use crate::foundations::{rat, rat_int, ExtRat, Rat};
    use crate::gamma_geometry::HalfSpace;
    use crate::stratify_nd::{enumerate_faces, Arrangement};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn bx(lo: i64, hi: i64) -> HPolyhedron {
        HPolyhedron::box_from(&vec![(rat_int(lo), true, rat_int(hi), false); 2])
    }

    fn quadrant(x: i64, y: i64) -> HPolyhedron {
        HPolyhedron::new(2, vec![HalfSpace::weak(vec![rat_int(-1), rat_int(0)], rat_int(-x)), HalfSpace::weak(vec![rat_int(0), rat_int(-1)], rat_int(-y))]).unwrap()
    }

    fn interval_poly(i: &crate::barcodes1d::Interval) -> HPolyhedron {
        let mut cs = Vec::new();
        if let ExtRat::Finite(a) = i.lower() {
            cs.push(HalfSpace { normal: vec![rat_int(-1)], offset: -a.clone(), strict: !i.lower_closed() });
        }
        if let ExtRat::Finite(b) = i.upper() {
            cs.push(HalfSpace { normal: vec![rat_int(1)], offset: b.clone(), strict: !i.upper_closed() });
        }
        HPolyhedron::new(1, cs).unwrap()
    }

    /// Hom of the cellular sheaves on the face poset of the common arrangement.
    fn face_poset_hom(s: &HPolyhedron, t: &HPolyhedron) -> usize {
        let mut hs: Vec<(Vector, Rat)> = s
            .constraints
            .iter()
            .chain(&t.constraints)
            .map(|c| {
                let lead = c.normal.iter().find(|v| !v.is_zero()).unwrap().clone();
                (c.normal.iter().map(|v| v / &lead).collect(), &c.offset / &lead)
            })
            .collect();
        hs.sort();
        hs.dedup();
        let dim = s.dim;
        let faces = if hs.is_empty() {
            vec![HPolyhedron::universe(dim)]
        } else {
            enumerate_faces(&Arrangement::new(dim, hs.clone()).unwrap(), &HPolyhedron::universe(dim))
        };
        let pts: Vec<Vector> = faces.iter().map(|f| f.witness().unwrap()).collect();
        let signs: Vec<Vec<std::cmp::Ordering>> =
            pts.iter().map(|p| hs.iter().map(|(n, b)| crate::gamma_geometry::dot(n, p).cmp(b)).collect()).collect();
        let below = |a: usize, b: usize| signs[a].iter().zip(&signs[b]).all(|(x, y)| x.is_eq() || x == y);
        let ins: Vec<bool> = pts.iter().map(|p| s.contains_point(p)).collect();
        let int: Vec<bool> = pts.iter().map(|p| t.contains_point(p)).collect();
        let n = faces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut dead = vec![false; n];
        let both = |i: usize| ins[i] && int[i];
        for a in 0..n {
            for b in 0..n {
                if a == b || !below(a, b) {
                    continue;
                }
                // a lies in the closure of b: restriction from a to b
                if both(a) && both(b) {
                    let (x, y) = (find(&mut parent, a), find(&mut parent, b));
                    parent[x] = y;
                } else if both(a) && int[b] && !ins[b] {
                    dead[a] = true;
                } else if both(b) && ins[a] && !int[a] {
                    dead[b] = true;
                }
            }
        }
        let mut killed = std::collections::BTreeSet::new();
        for i in (0..n).filter(|&i| dead[i]) {
            killed.insert(find(&mut parent, i));
        }
        let mut roots = std::collections::BTreeSet::new();
        for i in (0..n).filter(|&i| both(i)) {
            let r = find(&mut parent, i);
            if !killed.contains(&r) {
                roots.insert(r);
            }
        }
        roots.len()
    }

    #[test]
    fn hom_examples() {
        assert_eq!(hom_dim_nd(&bx(0, 2), &bx(1, 3)).unwrap(), 1);
        assert_eq!(hom_dim_nd(&bx(1, 3), &bx(0, 2)).unwrap(), 0);
        assert_eq!(hom_dim_nd(&bx(0, 1), &bx(2, 3)).unwrap(), 0);
        assert_eq!(hom_dim_nd(&bx(0, 1), &bx(0, 1)).unwrap(), 1);
        let (a, b, c) = (quadrant(1, 0), quadrant(0, 1), quadrant(2, 2));
        assert_eq!(hom_dim_nd(&a, &c).unwrap(), 1);
        assert_eq!(hom_dim_nd(&a, &b).unwrap(), 0);
        assert_eq!(hom_dim_nd(&b, &a).unwrap(), 0);
    }

    #[test]
    fn hom_space_blocks() {
        let z = BarcodeSheafND::unchecked(2, vec![Piece { set: bx(0, 2), multiplicity: 2, degree: 0 }]);
        let w = BarcodeSheafND::unchecked(2, vec![Piece { set: bx(1, 3), multiplicity: 3, degree: 0 }, Piece { set: bx(5, 6), multiplicity: 1, degree: 0 }]);
        assert_eq!(hom_space_nd(&z, &z).unwrap().dim, 4);
        assert_eq!(hom_space_nd(&z, &w).unwrap().dim, 6);
        assert_eq!(hom_space_nd(&w, &z).unwrap().dim, 0);
        let shifted = BarcodeSheafND::unchecked(2, vec![Piece { set: bx(1, 3), multiplicity: 1, degree: 1 }]);
        assert_eq!(hom_space_nd(&z, &shifted).unwrap().dim, 0);
    }

    #[test]
    fn tensor_examples() {
        let s = BarcodeSheafND::single(bx(0, 1));
        assert!(tensor_nd(&s, &s).unwrap().same_as(&s));
        assert!(tensor_nd(&s, &BarcodeSheafND::single(bx(2, 3))).unwrap().pieces.is_empty());
        let t = tensor_nd(&BarcodeSheafND::single(bx(0, 2)), &BarcodeSheafND::single(bx(1, 3))).unwrap();
        assert!(t.same_as(&BarcodeSheafND::single(bx(1, 2))));
    }

    #[test]
    fn pullback_examples() {
        let q2 = Cone::negative_orthant(2);
        let q1 = Cone::negative_orthant(1);
        let id = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]];
        let s = BarcodeSheafND::single(bx(0, 1));
        let p = pullback_linear(&id, &s, &q2, &q2).unwrap();
        assert!(p.gamma_compatible && p.sheaf.same_as(&s));

        let proj = vec![vec![rat_int(1), rat_int(0)]];
        let bar = BarcodeSheafND::single(HPolyhedron::box_from(&[(rat_int(0), true, rat_int(1), false)]));
        let p = pullback_linear(&proj, &bar, &q2, &q1).unwrap();
        let strip = HPolyhedron::new(2, vec![HalfSpace::weak(vec![rat_int(-1), rat_int(0)], rat_int(0)), HalfSpace { normal: vec![rat_int(1), rat_int(0)], offset: rat_int(1), strict: true }]).unwrap();
        assert!(p.gamma_compatible && p.sheaf.same_as(&BarcodeSheafND::single(strip)));

        let diag = vec![vec![rat_int(1)], vec![rat_int(1)]];
        let p = pullback_linear(&diag, &s, &q1, &q2).unwrap();
        assert!(p.gamma_compatible && p.sheaf.same_as(&bar));

        let flip = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(-1), rat_int(0)]];
        assert!(!pullback_linear(&flip, &s, &q2, &q2).unwrap().gamma_compatible);
    }

    #[test]
    fn new_rejects_bad_pieces() {
        let q = Cone::negative_orthant(2);
        let seg = HPolyhedron::box_from(&[(rat_int(0), false, rat_int(1), false), (rat_int(0), true, rat_int(0), true)]);
        assert!(BarcodeSheafND::new(2, vec![Piece { set: seg, multiplicity: 1, degree: 0 }], &q).is_err());
        assert!(BarcodeSheafND::new(2, vec![Piece { set: bx(0, 1), multiplicity: 1, degree: 0 }], &q).is_ok());
    }

    #[test]
    fn face_poset_agrees_on_fixtures() {
        let sets = [bx(0, 2), bx(1, 3), bx(2, 3), quadrant(1, 0), quadrant(0, 1), quadrant(2, 2), HPolyhedron::box_from(&vec![(rat_int(0), false, rat_int(1), false); 2])];
        for s in &sets {
            for t in &sets {
                assert_eq!(hom_dim_nd(s, t).unwrap(), face_poset_hom(s, t), "{s} -> {t}");
            }
        }
    }

    fn arb_box() -> impl Strategy<Value = HPolyhedron> {
        prop::collection::vec((-2i64..2, 1i64..3, any::<bool>(), any::<bool>()), 2).prop_map(|v| {
            HPolyhedron::box_from(&v.into_iter().map(|(a, w, lc, hc)| (rat_int(a), lc, rat_int(a + w), hc)).collect::<Vec<_>>())
        })
    }

    fn arb_sheaf() -> impl Strategy<Value = BarcodeSheafND> {
        prop::collection::vec((arb_box(), 1usize..3, 0i32..2), 0..3)
            .prop_map(|v| BarcodeSheafND::unchecked(2, v.into_iter().map(|(set, multiplicity, degree)| Piece { set, multiplicity, degree }).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn specializes_to_line(i in arb_interval(), j in arb_interval()) {
            prop_assert_eq!(hom_dim_nd(&interval_poly(&i), &interval_poly(&j)).unwrap(), hom_dim(&i, &j));
        }

        #[test]
        fn full_faithfulness(s in arb_box(), t in arb_box()) {
            prop_assert_eq!(hom_dim_nd(&s, &t).unwrap(), face_poset_hom(&s, &t));
        }

        #[test]
        fn tensor_laws(a in arb_sheaf(), b in arb_sheaf(), c in arb_sheaf()) {
            prop_assert!(tensor_nd(&a, &b).unwrap().same_as(&tensor_nd(&b, &a).unwrap()));
            let l = tensor_nd(&tensor_nd(&a, &b).unwrap(), &c).unwrap();
            let r = tensor_nd(&a, &tensor_nd(&b, &c).unwrap()).unwrap();
            prop_assert!(l.same_as(&r));
        }

        #[test]
        fn strata_carry_the_stalks(xs in prop::collection::vec((-2i64..2, 1i64..3), 1..3)) {
            // the support of a γ-barcode sheaf is covered by the strata up to stalk-free points
            use crate::stratify_nd::{stratify, PLGammaSheafSpec};
            let q = Cone::negative_orthant(2);
            let pieces: Vec<HPolyhedron> = xs.iter().map(|&(a, w)| bx(a, a + w)).collect();
            let f = BarcodeSheafND::new(2, pieces.iter().map(|p| Piece { set: p.clone(), multiplicity: 1, degree: 0 }).collect(), &q).unwrap();
            let hs: Vec<(Vector, Rat)> = pieces.iter().flat_map(|p| p.constraints.iter().map(|c| (c.normal.clone(), c.offset.clone()))).collect();
            let spec = PLGammaSheafSpec {
                arrangement: Arrangement::new(2, hs).unwrap(),
                support: pieces.iter().map(HPolyhedron::closure).collect(),
                cone: q.clone(),
                boxing: None,
            };
            let s = stratify(&spec).unwrap();
            for x in -8..=10 {
                for y in -8..=10 {
                    let p = vec![rat(x, 2), rat(y, 2)];
                    if spec.support.iter().any(|z| z.contains_point(&p)) && !s.strata.iter().any(|z| z.contains_point(&p)) {
                        prop_assert!(f.stalk(&p).is_empty());
                    }
                }
            }
            // constancy on strata
            for z in &s.strata {
                let w = z.witness().unwrap();
                for x in -8..=10 {
                    for y in -8..=10 {
                        let p = vec![rat(x, 2), rat(y, 2)];
                        if z.contains_point(&p) {
                            prop_assert_eq!(f.stalk(&p), f.stalk(&w));
                        }
                    }
                }
            }
        }
    }
}
