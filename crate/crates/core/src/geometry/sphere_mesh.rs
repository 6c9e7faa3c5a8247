//! Deterministic unit-sphere meshes with orientation-consistent
//! triangulations.
//!
//! S^2 comes from a subdivided octahedron, S^3 from a subdivided 16-cell
//! (the R^4 cross-polytope, whose 16 facets are tetrahedra). Subdivision
//! vertices are tracked as exact integer numerators over a power-of-two
//! denominator so that shared face/edge vertices dedupe exactly, then
//! projected onto the sphere. Every output simplex is ordered so that the
//! determinant of its vertex vectors is positive (outward orientation as
//! seen from the center).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{det3, det4, norm};

/// Vertices on the unit sphere plus an oriented triangulation into
/// (dim-1)-simplices (`dim` indices each).
#[derive(Clone, Debug)]
pub struct SphereMesh {
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<usize>>,
}

/// Smallest mesh of the given ambient dimension with at least
/// `min_vertices` vertices. Supported dims: 3 and 4 (S^1 is an ordered
/// polygon handled by the curve generators).
pub fn unit_sphere_mesh(ambient_dim: usize, min_vertices: usize) -> Result<SphereMesh> {
    match ambient_dim {
        3 => {
            // octahedron subdivision: 4k^2 + 2 vertices
            let mut k = 1usize;
            while 4 * k * k + 2 < min_vertices {
                k += 1;
            }
            Ok(octahedron_mesh(k))
        }
        4 => {
            let mut level = 0usize;
            loop {
                let mesh = cross_polytope_mesh(level);
                if mesh.vertices.len() >= min_vertices || level >= 6 {
                    return Ok(mesh);
                }
                level += 1;
            }
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Octahedron with each triangular face split into k^2 triangles, all
/// vertices pushed to the unit sphere.
fn octahedron_mesh(k: usize) -> SphereMesh {
    let ki = k as i64;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut simplices: Vec<Vec<usize>> = Vec::new();

    let mut vertex_at = |num: [i64; 3]| -> usize {
        if let Some(&i) = index.get(&num) {
            return i;
        }
        let raw: Vec<f64> = num.iter().map(|&x| x as f64 / ki as f64).collect();
        let i = vertices.len();
        vertices.push(normalize(&raw));
        index.insert(num, i);
        i
    };

    for sx in [-1i64, 1] {
        for sy in [-1i64, 1] {
            for sz in [-1i64, 1] {
                // face corners scaled by k so lattice points are integral
                let a = [sx * ki, 0, 0];
                let b = [0, sy * ki, 0];
                let c = [0, 0, sz * ki];
                let lattice = |i: i64, j: i64| -> [i64; 3] {
                    let m = ki - i - j;
                    [
                        i * a[0] + j * b[0] + m * c[0],
                        i * a[1] + j * b[1] + m * c[1],
                        i * a[2] + j * b[2] + m * c[2],
                    ]
                };
                for i in 0..ki {
                    for j in 0..(ki - i) {
                        let p00 = vertex_at(lattice(i, j));
                        let p10 = vertex_at(lattice(i + 1, j));
                        let p01 = vertex_at(lattice(i, j + 1));
                        simplices.push(vec![p00, p10, p01]);
                        if i + j < ki - 1 {
                            let p11 = vertex_at(lattice(i + 1, j + 1));
                            simplices.push(vec![p10, p11, p01]);
                        }
                    }
                }
            }
        }
    }

    orient_outward(&vertices, &mut simplices);
    SphereMesh { vertices, simplices }
}

/// 16-cell boundary with `level` rounds of tetrahedron refinement (each
/// tetrahedron splits into 8: four corner cells plus the central
/// octahedron cut along one diagonal), vertices pushed to the unit sphere.
fn cross_polytope_mesh(level: usize) -> SphereMesh {
    let scale = 1i64 << level;
    let mut index: HashMap<[i64; 4], usize> = HashMap::new();
    let mut numerators: Vec<[i64; 4]> = Vec::new();
    let mut vertices: Vec<Vec<f64>> = Vec::new();

    let mut vertex_at = |num: [i64; 4],
                         numerators: &mut Vec<[i64; 4]>,
                         vertices: &mut Vec<Vec<f64>>|
     -> usize {
        if let Some(&i) = index.get(&num) {
            return i;
        }
        let raw: Vec<f64> = num.iter().map(|&x| x as f64 / scale as f64).collect();
        let i = vertices.len();
        vertices.push(normalize(&raw));
        numerators.push(num);
        index.insert(num, i);
        i
    };

    let mut tets: Vec<[usize; 4]> = Vec::new();
    for s0 in [-1i64, 1] {
        for s1 in [-1i64, 1] {
            for s2 in [-1i64, 1] {
                for s3 in [-1i64, 1] {
                    let corners = [
                        [s0 * scale, 0, 0, 0],
                        [0, s1 * scale, 0, 0],
                        [0, 0, s2 * scale, 0],
                        [0, 0, 0, s3 * scale],
                    ];
                    let idx = corners.map(|c| vertex_at(c, &mut numerators, &mut vertices));
                    tets.push(idx);
                }
            }
        }
    }

    for _ in 0..level {
        let mut next = Vec::with_capacity(tets.len() * 8);
        for tet in &tets {
            let v = *tet;
            let mut mid = |a: usize, b: usize,
                       numerators: &mut Vec<[i64; 4]>,
                       vertices: &mut Vec<Vec<f64>>|
             -> usize {
                let pa = numerators[a];
                let pb = numerators[b];
                let num = [
                    (pa[0] + pb[0]) / 2,
                    (pa[1] + pb[1]) / 2,
                    (pa[2] + pb[2]) / 2,
                    (pa[3] + pb[3]) / 2,
                ];
                vertex_at(num, numerators, vertices)
            };
            let m01 = mid(v[0], v[1], &mut numerators, &mut vertices);
            let m02 = mid(v[0], v[2], &mut numerators, &mut vertices);
            let m03 = mid(v[0], v[3], &mut numerators, &mut vertices);
            let m12 = mid(v[1], v[2], &mut numerators, &mut vertices);
            let m13 = mid(v[1], v[3], &mut numerators, &mut vertices);
            let m23 = mid(v[2], v[3], &mut numerators, &mut vertices);
            next.push([v[0], m01, m02, m03]);
            next.push([m01, v[1], m12, m13]);
            next.push([m02, m12, v[2], m23]);
            next.push([m03, m13, m23, v[3]]);
            // central octahedron cut along the m02-m13 diagonal; the
            // (m13, m02, ..) order keeps each cell's orientation equal to
            // the parent's
            next.push([m13, m02, m01, m03]);
            next.push([m13, m02, m03, m23]);
            next.push([m13, m02, m23, m12]);
            next.push([m13, m02, m12, m01]);
        }
        tets = next;
    }

    let mut simplices: Vec<Vec<usize>> = tets.iter().map(|t| t.to_vec()).collect();
    orient_outward(&vertices, &mut simplices);
    SphereMesh { vertices, simplices }
}

/// Order each simplex so det[v_1, ..., v_n] > 0. Valid as an outward
/// orientation because the mesh is star-shaped about the origin.
fn orient_outward(vertices: &[Vec<f64>], simplices: &mut [Vec<usize>]) {
    for s in simplices.iter_mut() {
        let d = match s.len() {
            3 => det3(&vertices[s[0]], &vertices[s[1]], &vertices[s[2]]),
            4 => det4(
                &vertices[s[0]],
                &vertices[s[1]],
                &vertices[s[2]],
                &vertices[s[3]],
            ),
            _ => unreachable!("sphere mesh simplices have 3 or 4 vertices"),
        };
        if d < 0.0 {
            let n = s.len();
            s.swap(n - 2, n - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_counts_and_unit_vertices() {
        for k in [1usize, 3, 8] {
            let mesh = octahedron_mesh(k);
            assert_eq!(mesh.vertices.len(), 4 * k * k + 2);
            assert_eq!(mesh.simplices.len(), 8 * k * k);
            for v in &mesh.vertices {
                assert!((norm(v) - 1.0).abs() < 1e-12);
            }
            for s in &mesh.simplices {
                let d = det3(
                    &mesh.vertices[s[0]],
                    &mesh.vertices[s[1]],
                    &mesh.vertices[s[2]],
                );
                assert!(d > 0.0);
            }
        }
    }

    #[test]
    fn octahedron_is_closed_surface() {
        // every edge must be shared by exactly two triangles
        let mesh = octahedron_mesh(4);
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for s in &mesh.simplices {
            for e in [(s[0], s[1]), (s[1], s[2]), (s[2], s[0])] {
                let key = (e.0.min(e.1), e.0.max(e.1));
                *edge_count.entry(key).or_insert(0) += 1;
            }
        }
        assert!(edge_count.values().all(|&c| c == 2));
        // Euler characteristic of S^2
        let v = mesh.vertices.len() as i64;
        let e = edge_count.len() as i64;
        let f = mesh.simplices.len() as i64;
        assert_eq!(v - e + f, 2);
    }

    #[test]
    fn cross_polytope_is_closed_3_manifold() {
        let mesh = cross_polytope_mesh(2);
        assert_eq!(mesh.simplices.len(), 16 * 64);
        for v in &mesh.vertices {
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
        // every triangular face shared by exactly two tetrahedra
        let mut face_count: HashMap<[usize; 3], usize> = HashMap::new();
        for s in &mesh.simplices {
            for skip in 0..4 {
                let mut f: Vec<usize> =
                    (0..4).filter(|&i| i != skip).map(|i| s[i]).collect();
                f.sort_unstable();
                *face_count.entry([f[0], f[1], f[2]]).or_insert(0) += 1;
            }
        }
        assert!(face_count.values().all(|&c| c == 2));
        for s in &mesh.simplices {
            let d = det4(
                &mesh.vertices[s[0]],
                &mesh.vertices[s[1]],
                &mesh.vertices[s[2]],
                &mesh.vertices[s[3]],
            );
            assert!(d > 0.0, "tetrahedron not outward oriented: det {d}");
        }
    }

    #[test]
    fn mesh_size_selection() {
        let mesh = unit_sphere_mesh(3, 1000).unwrap();
        assert!(mesh.vertices.len() >= 1000);
        let mesh4 = unit_sphere_mesh(4, 500).unwrap();
        assert!(mesh4.vertices.len() >= 500);
        assert!(unit_sphere_mesh(5, 10).is_err());
    }
}
