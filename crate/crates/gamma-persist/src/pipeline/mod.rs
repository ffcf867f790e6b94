//! Sublevel persistence of PL functions on finite simplicial meshes.

mod experiments;
mod persistence;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::{parse_rat, Rat};
use crate::gamma_geometry::Vector;

pub use experiments::{
    annulus_fixture, perturbation_trials, pl_approximate, product_support_corner, stability_experiment,
    Approximation, StabilityReport, TrialConfig, TrialsReport,
};
pub use persistence::{betti_numbers, lower_star_filtration, sublevel_persistence, Filtration};

/// Finite simplicial complex with rational vertex coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MeshJson", into = "MeshJson")]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Vector>,
    /// Every simplex, closed under faces, each as a sorted vertex list.
    simplices: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MeshJson {
    dim: usize,
    #[serde(with = "crate::gamma_geometry::rat_mat")]
    vertices: Vec<Vector>,
    simplices: Vec<Vec<usize>>,
}

impl TryFrom<MeshJson> for Mesh {
    type Error = Error;
    fn try_from(m: MeshJson) -> Result<Mesh> {
        Mesh::new(m.dim, m.vertices, m.simplices)
    }
}

impl From<Mesh> for MeshJson {
    fn from(m: Mesh) -> MeshJson {
        let top = m.simplices.iter().filter(|s| s.len() > 1).cloned().collect();
        MeshJson { dim: m.dim, vertices: m.vertices, simplices: top }
    }
}

impl Mesh {
    /// Builds the face closure of `simplices`; every vertex is a 0-simplex.
    pub fn new(dim: usize, vertices: Vec<Vector>, simplices: Vec<Vec<usize>>) -> Result<Mesh> {
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::Shape("vertex coordinates must have the mesh dimension".into()));
        }
        let mut all: BTreeSet<Vec<usize>> = (0..vertices.len()).map(|v| vec![v]).collect();
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Invalid("simplex refers to a missing vertex".into()));
            }
            for mask in 1u64..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let mut simplices: Vec<Vec<usize>> = all.into_iter().collect();
        simplices.sort_by_key(|s| s.len());
        Ok(Mesh { dim, vertices, simplices })
    }

    /// The path through sorted points of the line.
    pub fn path(xs: &[Rat]) -> Result<Mesh> {
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("path vertices must be strictly increasing".into()));
        }
        let edges = (1..xs.len()).map(|i| vec![i - 1, i]).collect();
        Mesh::new(1, xs.iter().map(|x| vec![x.clone()]).collect(), edges)
    }

    /// Triangulated product of two paths, cut along the `(+1,+1)` diagonals.
    pub fn grid(xs: &[Rat], ys: &[Rat]) -> Result<Mesh> {
        if xs.windows(2).chain(ys.windows(2)).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("grid coordinates must be strictly increasing".into()));
        }
        let id = |i: usize, j: usize| i * ys.len() + j;
        let vertices = xs.iter().flat_map(|x| ys.iter().map(move |y| vec![x.clone(), y.clone()])).collect();
        let mut tris = Vec::new();
        for i in 1..xs.len() {
            for j in 1..ys.len() {
                tris.push(vec![id(i - 1, j - 1), id(i, j - 1), id(i, j)]);
                tris.push(vec![id(i - 1, j - 1), id(i - 1, j), id(i, j)]);
            }
        }
        if xs.len() == 1 || ys.len() == 1 {
            for i in 0..xs.len() {
                for j in 0..ys.len() {
                    if i + 1 < xs.len() {
                        tris.push(vec![id(i, j), id(i + 1, j)]);
                    }
                    if j + 1 < ys.len() {
                        tris.push(vec![id(i, j), id(i, j + 1)]);
                    }
                }
            }
        }
        Mesh::new(2, vertices, tris)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }
}

/// A PL function given by its vertex values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshFunction {
    pub mesh: Mesh,
    #[serde(with = "crate::gamma_geometry::rat_vec")]
    pub values: Vec<Rat>,
    /// The user's declaration that `{f <= t}` is compact for every `t`.
    #[serde(default = "yes")]
    pub compact_sublevels: bool,
}

fn yes() -> bool {
    true
}

impl MeshFunction {
    pub fn new(mesh: Mesh, values: Vec<Rat>) -> Result<MeshFunction> {
        if values.len() != mesh.vertices.len() {
            return Err(Error::Shape("one value per vertex is required".into()));
        }
        Ok(MeshFunction { mesh, values, compact_sublevels: true })
    }

    pub fn from_fn(mesh: Mesh, f: impl Fn(&[Rat]) -> Rat) -> MeshFunction {
        let values = mesh.vertices.iter().map(|v| f(v)).collect();
        MeshFunction { mesh, values, compact_sublevels: true }
    }

    /// `‖f - g‖_∞`, attained at a vertex for PL functions on one mesh.
    pub fn sup_distance(&self, o: &MeshFunction) -> Result<Rat> {
        if self.mesh != o.mesh {
            return Err(Error::Shape("functions live on different meshes".into()));
        }
        Ok(self.values.iter().zip(&o.values).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rat::zero))
    }

    pub fn min_value(&self) -> Option<&Rat> {
        self.values.iter().min()
    }

    /// Value of the PL interpolant at `x`, for 1-D paths.
    pub fn eval_path(&self, x: &Rat) -> Option<Rat> {
        if self.mesh.dim != 1 {
            return None;
        }
        let xs: Vec<&Rat> = self.mesh.vertices.iter().map(|v| &v[0]).collect();
        let i = xs.partition_point(|v| *v <= x);
        if i == 0 || (i == xs.len() && xs[i - 1] != x) {
            return None;
        }
        if xs[i - 1] == x {
            return Some(self.values[i - 1].clone());
        }
        let s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        Some(&self.values[i - 1] + s * (&self.values[i] - &self.values[i - 1]))
    }
}

/// A finite sample `S` with optional growth rates `ρ(s) > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    #[serde(with = "crate::gamma_geometry::rat_mat")]
    pub points: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rats")]
    pub weights: Option<Vec<Rat>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vector>, weights: Option<Vec<Rat>>) -> Result<PointCloud> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Shape("points have different dimensions".into()));
        }
        if let Some(w) = &weights {
            if w.len() != points.len() || w.iter().any(|r| !r.is_positive()) {
                return Err(Error::Invalid("one positive weight per point is required".into()));
            }
        }
        Ok(PointCloud { dim, points, weights })
    }

    /// One point per row; an extra last column is read as weights when `weighted`.
    pub fn from_csv(text: &str, weighted: bool) -> Result<PointCloud> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
        let (mut pts, mut ws) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let mut row = rec.iter().map(parse_rat).collect::<Result<Vec<Rat>>>()?;
            if weighted {
                ws.push(row.pop().ok_or_else(|| Error::Parse("empty row".into()))?);
            }
            pts.push(row);
        }
        PointCloud::new(pts, weighted.then_some(ws))
    }
}

mod opt_rats {
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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Linf,
    L1,
    /// Squared Euclidean distance; its sublevel sets are those of the Euclidean one with `t ↦ t²`.
    L2sq,
}

impl Metric {
    pub fn dist(self, a: &[Rat], b: &[Rat]) -> Rat {
        let d = a.iter().zip(b).map(|(x, y)| x - y);
        match self {
            Metric::Linf => d.map(|v| v.abs()).max().unwrap_or_else(Rat::zero),
            Metric::L1 => d.map(|v| v.abs()).sum(),
            Metric::L2sq => d.map(|v| &v * &v).sum(),
        }
    }
}

/// `f(x) = min_s d(x,s) / ρ(s)` at every vertex.
pub fn distance_function(cloud: &PointCloud, mesh: &Mesh, metric: Metric) -> Result<MeshFunction> {
    if cloud.points.is_empty() {
        return Err(Error::Invalid("the point cloud is empty".into()));
    }
    if cloud.dim != mesh.dim {
        return Err(Error::Shape("cloud and mesh dimensions differ".into()));
    }
    let f = |x: &[Rat]| {
        cloud
            .points
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let d = metric.dist(x, s);
                match &cloud.weights {
                    Some(w) => d / &w[i],
                    None => d,
                }
            })
            .min()
            .expect("non-empty cloud")
    };
    Ok(MeshFunction::from_fn(mesh.clone(), f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{rat, rat_int};

    pub(crate) fn halves(lo: i64, hi: i64) -> Vec<Rat> {
        (2 * lo..=2 * hi).map(|k| rat(k, 2)).collect()
    }

    #[test]
    fn distance_examples() {
        let mesh = Mesh::path(&halves(-2, 5)).unwrap();
        let cloud = PointCloud::new(vec![vec![rat_int(0)], vec![rat_int(3)]], None).unwrap();
        let f = distance_function(&cloud, &mesh, Metric::Linf).unwrap();
        assert_eq!(f.eval_path(&rat_int(1)), Some(rat_int(1)));
        assert_eq!(f.eval_path(&rat(3, 2)), Some(rat(3, 2)));
        let one = PointCloud::new(vec![vec![rat_int(0)]], None).unwrap();
        let f = distance_function(&one, &mesh, Metric::L1).unwrap();
        for (v, y) in mesh.vertices().iter().zip(&f.values) {
            assert_eq!(*y, v[0].abs());
        }
        let w = PointCloud::new(vec![vec![rat_int(0)]], Some(vec![rat_int(2)])).unwrap();
        let f = distance_function(&w, &mesh, Metric::Linf).unwrap();
        // {f <= t} is the ball of radius 2t
        for t in halves(0, 2) {
            for v in mesh.vertices() {
                let inside = f.eval_path(&v[0]).unwrap() <= t;
                assert_eq!(inside, v[0].abs() <= rat_int(2) * &t);
            }
        }
        assert!(distance_function(&PointCloud::new(vec![], None).unwrap(), &mesh, Metric::Linf).is_err());
    }

    #[test]
    fn metrics() {
        let (a, b) = (vec![rat_int(0), rat_int(0)], vec![rat_int(3), rat_int(-4)]);
        assert_eq!(Metric::Linf.dist(&a, &b), rat_int(4));
        assert_eq!(Metric::L1.dist(&a, &b), rat_int(7));
        assert_eq!(Metric::L2sq.dist(&a, &b), rat_int(25));
    }

    #[test]
    fn mesh_closure_and_json() {
        let m = Mesh::grid(&halves(0, 1), &halves(0, 1)).unwrap();
        let count = |k: usize| m.simplices().iter().filter(|s| s.len() == k).count();
        assert_eq!((count(1), count(2), count(3)), (9, 16, 8));
        let f = MeshFunction::from_fn(m, |x| &x[0] + &x[1]);
        let j = serde_json::to_string(&f).unwrap();
        let back: MeshFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        assert!(Mesh::new(1, vec![vec![rat_int(0)]], vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn csv_cloud() {
        let c = PointCloud::from_csv("# pts\n0, 1/2\n1.5,-2\n", false).unwrap();
        assert_eq!(c.points, vec![vec![rat_int(0), rat(1, 2)], vec![rat(3, 2), rat_int(-2)]]);
        let w = PointCloud::from_csv("0,2\n1,3\n", true).unwrap();
        assert_eq!(w.weights, Some(vec![rat_int(2), rat_int(3)]));
        assert!(PointCloud::from_csv("0,x\n", false).is_err());
        assert!(PointCloud::from_csv("0,0\n", true).is_err());
    }
}
