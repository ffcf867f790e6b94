use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polyhedron::{dot, unit, HPolyhedron, HalfSpace, Vector};
use crate::error::{Error, Result};
use crate::foundations::{FieldId, Matrix, Rat};

type Row = (Vector, Rat, bool);

/// Eliminates the variables at positions `keep..` from a system of rows, by
/// Fourier–Motzkin with redundancy removal after each step.
pub(crate) fn project(rows: Vec<Row>, total: usize, keep: usize) -> HPolyhedron {
    let mut p = HPolyhedron::from_rows(total, rows);
    for v in (keep..total).rev() {
        if p.is_empty() {
            return HPolyhedron::empty(keep);
        }
        let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
        for c in &p.constraints {
            let k = &c.normal[v];
            if k.is_positive() {
                pos.push(c);
            } else if k.is_negative() {
                neg.push(c);
            } else {
                out.push((c.normal.clone(), c.offset.clone(), c.strict));
            }
        }
        for a in &pos {
            for b in &neg {
                let (pa, qb) = (a.normal[v].clone(), -b.normal[v].clone());
                let normal: Vector = a.normal.iter().zip(&b.normal).map(|(x, y)| &qb * x + &pa * y).collect();
                out.push((normal, &qb * &a.offset + &pa * &b.offset, a.strict || b.strict));
            }
        }
        p = HPolyhedron::from_rows(total, out).canonicalize();
    }
    if p.is_empty() {
        return HPolyhedron::empty(keep);
    }
    let rows = p.constraints.into_iter().map(|c| (c.normal[..keep].to_vec(), c.offset, c.strict)).collect();
    HPolyhedron::from_rows(keep, rows).canonicalize()
}

/// Normals `m` with `cone(rays) = {x : ⟨m,x⟩ ≤ 0}`.
fn rays_to_normals(dim: usize, rays: &[Vector]) -> Vec<Vector> {
    let k = rays.len();
    let total = dim + k;
    let mut rows = Vec::new();
    for i in 0..dim {
        // x_i - Σ_j r_ji λ_j = 0
        let mut row = unit(total, i);
        for (j, r) in rays.iter().enumerate() {
            row[dim + j] = -r[i].clone();
        }
        rows.push((row.iter().map(|v| -v).collect(), Rat::zero(), false));
        rows.push((row, Rat::zero(), false));
    }
    for j in 0..k {
        rows.push((unit(total, dim + j).iter().map(|v| -v).collect(), Rat::zero(), false));
    }
    project(rows, total, dim).constraints.into_iter().map(|c| c.normal).collect()
}

/// Closed convex polyhedral cone, kept in both representations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ConeJson", into = "ConeJson")]
pub struct Cone {
    dim: usize,
    normals: Vec<Vector>,
    rays: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    rays: Vec<Vec<String>>,
}

impl TryFrom<ConeJson> for Cone {
    type Error = Error;
    fn try_from(j: ConeJson) -> Result<Cone> {
        let rays = j
            .rays
            .iter()
            .map(|r| r.iter().map(|s| crate::foundations::parse_rat(s)).collect::<Result<Vector>>())
            .collect::<Result<Vec<_>>>()?;
        Cone::from_rays(j.dim, rays)
    }
}

impl From<Cone> for ConeJson {
    fn from(c: Cone) -> ConeJson {
        ConeJson { dim: c.dim, rays: c.rays.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect() }
    }
}

impl PartialEq for Cone {
    fn eq(&self, o: &Cone) -> bool {
        self.as_polyhedron() == o.as_polyhedron()
    }
}

impl Cone {
    pub fn from_rays(dim: usize, rays: Vec<Vector>) -> Result<Cone> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if rays.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("ray has the wrong length".into()));
        }
        let rays: Vec<Vector> = rays.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect();
        let normals = rays_to_normals(dim, &rays);
        Ok(Cone { dim, normals, rays })
    }

    /// `{x : ⟨n,x⟩ ≤ 0 for every normal n}`.
    pub fn from_normals(dim: usize, normals: Vec<Vector>) -> Result<Cone> {
        if normals.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("normal has the wrong length".into()));
        }
        let normals: Vec<Vector> = normals.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect();
        // the cone cut out by N is generated by the normals of cone(N)
        let rays = rays_to_normals(dim, &normals);
        let normals = rays_to_normals(dim, &rays);
        Ok(Cone { dim, normals, rays })
    }

    /// `(ℝ≤0)^n`.
    pub fn negative_orthant(dim: usize) -> Cone {
        Cone::from_rays(dim, (0..dim).map(|i| unit(dim, i).iter().map(|v| -v).collect()).collect()).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn as_polyhedron(&self) -> HPolyhedron {
        let cs = self.normals.iter().map(|n| HalfSpace::weak(n.clone(), Rat::zero())).collect();
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    /// `Int γ`, empty when the cone is not solid.
    pub fn interior(&self) -> HPolyhedron {
        self.as_polyhedron().interior()
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.normals.iter().all(|n| dot(n, x) <= Rat::zero())
    }

    /// `γ^a = -γ`.
    pub fn antipodal(&self) -> Cone {
        let neg = |v: &Vec<Vector>| v.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Cone { dim: self.dim, normals: neg(&self.normals), rays: neg(&self.rays) }
    }

    /// `γ° = {ξ : ⟨ξ,v⟩ ≥ 0 for v ∈ γ}`.
    pub fn polar(&self) -> Cone {
        let neg = |v: &Vec<Vector>| v.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Cone { dim: self.dim, normals: neg(&self.rays), rays: neg(&self.normals) }
    }

    /// `γ ∩ γ^a = {0}`.
    pub fn is_proper(&self) -> bool {
        let rows: Vec<Vec<crate::foundations::FieldElem>> = self
            .normals
            .iter()
            .map(|n| n.iter().map(|v| FieldId::Q.from_rat(v).expect("rational")).collect())
            .collect();
        let data: Vec<_> = rows.into_iter().flatten().collect();
        let mat = Matrix::from_entries(FieldId::Q, self.normals.len(), self.dim, data).expect("shape");
        mat.rank() == self.dim
    }

    pub fn is_solid(&self) -> bool {
        !self.interior().is_empty()
    }

    /// Sum of the generators, a point of `Int γ` when the cone is solid.
    pub fn ray_sum(&self) -> Vector {
        let mut s = vec![Rat::zero(); self.dim];
        for r in &self.rays {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }

    pub(crate) fn require_proper_solid(&self) -> Result<()> {
        if !self.is_proper() {
            return Err(Error::Invalid("cone is not proper".into()));
        }
        if !self.is_solid() {
            return Err(Error::Invalid("cone has empty interior".into()));
        }
        Ok(())
    }
}

fn sum_with_cone(p: &HPolyhedron, c: &Cone, open_cone: bool) -> HPolyhedron {
    if p.is_empty() {
        return HPolyhedron::empty(p.dim);
    }
    let dim = p.dim;
    let k = c.rays.len();
    let total = dim + k;
    let mut rows = Vec::new();
    // y = x + Rλ with x ∈ p: ⟨n, y - Rλ⟩ ≤ b
    for h in &p.constraints {
        let mut row = h.normal.clone();
        row.extend(c.rays.iter().map(|r| -dot(&h.normal, r)));
        rows.push((row, h.offset.clone(), h.strict));
    }
    for j in 0..k {
        rows.push((unit(total, dim + j).iter().map(|v| -v).collect(), Rat::zero(), open_cone));
    }
    project(rows, total, dim)
}

/// `P + γ`.
pub fn minkowski_cone(p: &HPolyhedron, c: &Cone) -> Result<HPolyhedron> {
    if p.dim != c.dim {
        return Err(Error::Shape("polyhedron and cone dimensions differ".into()));
    }
    Ok(sum_with_cone(p, c, false))
}

/// `P + Int γ`, for a solid cone.
pub fn minkowski_int_cone(p: &HPolyhedron, c: &Cone) -> Result<HPolyhedron> {
    if p.dim != c.dim {
        return Err(Error::Shape("polyhedron and cone dimensions differ".into()));
    }
    if !c.is_solid() {
        return Err(Error::Invalid("cone has empty interior".into()));
    }
    Ok(sum_with_cone(p, c, true))
}
