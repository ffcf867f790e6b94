use serde::Serialize;

use super::cone::{minkowski_cone, Cone};
use super::polyhedron::{unit, HPolyhedron, HalfSpace};
use crate::error::{Error, Result};
use crate::foundations::Rat;

/// Topological and γ-topological properties of a convex polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaPredicates {
    pub open: bool,
    pub closed: bool,
    pub gamma_open: bool,
    pub gamma_closed: bool,
    pub gamma_locally_closed: bool,
    pub gamma_flat: bool,
    pub gamma_proper: bool,
}

fn sum(p: &HPolyhedron, c: &Cone) -> HPolyhedron {
    minkowski_cone(p, c).expect("dimensions checked")
}

pub fn is_gamma_flat(p: &HPolyhedron, c: &Cone) -> bool {
    sum(p, c).intersect(&sum(p, &c.antipodal())) == *p
}

pub fn is_gamma_locally_closed(p: &HPolyhedron, c: &Cone) -> bool {
    omega_to_z_unchecked(&p.interior(), c) == *p
}

/// Recession cone of the closure meets γ only at the origin.
pub fn is_gamma_proper(p: &HPolyhedron, c: &Cone) -> bool {
    if p.is_empty() {
        return true;
    }
    let dim = p.dim;
    let rec: Vec<HalfSpace> = p
        .closure()
        .constraints
        .into_iter()
        .map(|h| HalfSpace { offset: Rat::from_integer(0.into()), ..h })
        .chain(c.as_polyhedron().constraints)
        .collect();
    let k = HPolyhedron { dim, constraints: rec };
    (0..dim).all(|i| {
        let e = unit(dim, i);
        let neg: Vec<Rat> = e.iter().map(|v| -v).collect();
        let zero = Rat::from_integer(0.into());
        k.with(HalfSpace { normal: e, offset: zero.clone(), strict: true }).is_empty()
            && k.with(HalfSpace { normal: neg, offset: zero, strict: true }).is_empty()
    })
}

pub fn gamma_predicates(p: &HPolyhedron, c: &Cone) -> Result<GammaPredicates> {
    if p.dim != c.dim() {
        return Err(Error::Shape("polyhedron and cone dimensions differ".into()));
    }
    c.require_proper_solid()?;
    let open = p.interior() == *p;
    let closed = p.closure() == *p;
    let plus = sum(p, c);
    let minus = sum(p, &c.antipodal());
    Ok(GammaPredicates {
        open,
        closed,
        gamma_open: open && plus == *p,
        gamma_closed: closed && minus == *p,
        gamma_locally_closed: is_gamma_locally_closed(p, c),
        gamma_flat: plus.intersect(&minus) == *p,
        gamma_proper: is_gamma_proper(p, c),
    })
}

fn omega_to_z_unchecked(omega: &HPolyhedron, c: &Cone) -> HPolyhedron {
    if omega.is_empty() {
        return HPolyhedron::empty(omega.dim);
    }
    sum(omega, c).intersect(&sum(omega, &c.antipodal()).closure()).canonicalize()
}

/// `Ω ↦ (Ω + γ) ∩ closure(Ω + γ^a)` for a γ-flat open `Ω`.
pub fn omega_to_z(omega: &HPolyhedron, c: &Cone) -> Result<HPolyhedron> {
    if omega.dim != c.dim() {
        return Err(Error::Shape("polyhedron and cone dimensions differ".into()));
    }
    c.require_proper_solid()?;
    if omega.interior() != *omega || !is_gamma_flat(omega, c) {
        return Err(Error::Invalid("input is not a gamma-flat open set".into()));
    }
    Ok(omega_to_z_unchecked(omega, c))
}

/// Interior of a γ-locally closed set.
pub fn z_to_omega(z: &HPolyhedron, c: &Cone) -> Result<HPolyhedron> {
    if z.dim != c.dim() {
        return Err(Error::Shape("polyhedron and cone dimensions differ".into()));
    }
    c.require_proper_solid()?;
    if !is_gamma_locally_closed(z, c) {
        return Err(Error::Invalid("input is not gamma-locally closed".into()));
    }
    Ok(z.interior().canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{rat, rat_int};
    use crate::gamma_geometry::cone::{minkowski_int_cone, tests::square_cone};
    use crate::gamma_geometry::polyhedron::Vector;
    use proptest::prelude::*;

    fn q2() -> Cone {
        Cone::negative_orthant(2)
    }

    fn bx(lc: bool, hc: bool) -> HPolyhedron {
        HPolyhedron::box_from(&vec![(rat_int(0), lc, rat_int(1), hc); 2])
    }

    fn v(x: &[i64]) -> Vector {
        x.iter().map(|&k| rat_int(k)).collect()
    }

    #[test]
    fn predicate_examples() {
        let strip = HPolyhedron::box_from(&[(rat_int(0), true, rat_int(1), true)])
            .preimage(&[v(&[1, 0])])
            .unwrap();
        let p = gamma_predicates(&strip, &q2()).unwrap();
        assert!(p.gamma_flat && p.closed && !p.gamma_proper);
        let p = gamma_predicates(&bx(true, false), &q2()).unwrap();
        assert!(p.gamma_locally_closed && !p.open && !p.closed && p.gamma_proper);
        let p = gamma_predicates(&HPolyhedron::universe(2), &q2()).unwrap();
        assert!(!p.gamma_proper && p.gamma_open && p.gamma_closed);
        let quad = HPolyhedron::box_from(&vec![(rat_int(0), false, rat_int(0), false); 2]);
        assert!(quad.is_empty());
        let up = q2().antipodal().interior();
        let p = gamma_predicates(&q2().interior(), &q2()).unwrap();
        assert!(p.gamma_open && !p.gamma_closed);
        let p = gamma_predicates(&up, &q2()).unwrap();
        assert!(!p.gamma_open && p.open);
        assert!(gamma_predicates(&strip, &Cone::from_normals(2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn omega_z_examples() {
        assert_eq!(omega_to_z(&bx(false, false), &q2()).unwrap(), bx(true, false));
        assert_eq!(z_to_omega(&bx(true, false), &q2()).unwrap(), bx(false, false));
        let z = omega_to_z(&q2().interior(), &q2()).unwrap();
        assert!(is_gamma_locally_closed(&z, &q2()));
        assert_eq!(z.interior(), q2().interior());
        assert!(omega_to_z(&HPolyhedron::empty(2), &q2()).unwrap().is_empty());
        let half = HPolyhedron::new(2, vec![HalfSpace::weak(v(&[-1, 0]), rat_int(0))]).unwrap();
        let open_half = HPolyhedron::new(2, vec![HalfSpace::new(v(&[-1, 0]), rat_int(0), true).unwrap()]).unwrap();
        assert_eq!(z_to_omega(&half, &q2()).unwrap(), open_half);
        assert!(z_to_omega(&HPolyhedron::singleton(&v(&[0, 0])), &q2()).is_err());
        assert!(omega_to_z(&bx(true, true), &q2()).is_err());
    }

    /// Boxes with random flags and rational bounds in the plane.
    fn arb_box() -> impl Strategy<Value = HPolyhedron> {
        prop::collection::vec((-3i64..3, 1i64..4, any::<bool>(), any::<bool>()), 2).prop_map(|v| {
            HPolyhedron::box_from(&v.into_iter().map(|(a, l, lc, hc)| (rat(a, 2), lc, rat(a + l, 2), hc)).collect::<Vec<_>>())
        })
    }

    fn arb_poly3() -> impl Strategy<Value = HPolyhedron> {
        prop::collection::vec((prop::collection::vec(-2i64..3, 3), -3i64..4, any::<bool>()), 1..5).prop_map(|rows| {
            HPolyhedron::from_rows(3, rows.into_iter().map(|(n, b, s)| (v(&n), rat_int(b), s)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn interior_cone_absorbs_closure(p in arb_poly3()) {
            let c = square_cone();
            prop_assert_eq!(minkowski_int_cone(&p, &c).unwrap(), minkowski_int_cone(&p.closure(), &c).unwrap());
            let u = p.interior();
            let ui = minkowski_int_cone(&u, &c).unwrap();
            prop_assert_eq!(ui.clone(), minkowski_cone(&u, &c).unwrap());
            prop_assert!(ui.contains(&u));
        }

        #[test]
        fn locally_closed_boxes(b in arb_box()) {
            let c = q2();
            // boxes that are closed below and open above are γ-locally closed
            let z = omega_to_z(&b.interior(), &c).unwrap();
            prop_assert!(is_gamma_locally_closed(&z, &c));
            prop_assert!(is_gamma_flat(&z, &c));
            prop_assert_eq!(z_to_omega(&z, &c).unwrap(), b.interior());
            prop_assert_eq!(minkowski_cone(&z, &c).unwrap(), minkowski_int_cone(&z.interior(), &c).unwrap());
        }

        #[test]
        fn gamma_open_regular(p in arb_poly3()) {
            let c = square_cone();
            let u = minkowski_int_cone(&p, &c).unwrap();
            if !u.is_empty() {
                prop_assert_eq!(u.closure().interior(), u);
            }
        }

        #[test]
        fn round_trip_square_cone(p in arb_poly3()) {
            let c = square_cone();
            let omega = p.interior();
            if is_gamma_flat(&omega, &c) {
                let z = omega_to_z(&omega, &c).unwrap();
                prop_assert_eq!(z_to_omega(&z, &c).unwrap(), omega);
            }
        }

        #[test]
        fn disjoint_opens_give_disjoint_strata(a in arb_box(), b in arb_box()) {
            let c = q2();
            let (u1, u2) = (a.interior(), b.interior());
            if u1.intersect(&u2).is_empty() {
                let z1 = omega_to_z(&u1, &c).unwrap();
                let z2 = omega_to_z(&u2, &c).unwrap();
                prop_assert!(z1.intersect(&z2).is_empty());
            }
        }
    }
}
