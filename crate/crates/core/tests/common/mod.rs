//! Shared test oracles, independent of the implementation paths they
//! check.

/// Linking number of two closed polygonal curves by counting signed
/// crossings of a generic planar projection. The convention is calibrated
/// to the Seifert-disk count: for the canonical pair (circle A in the
/// xy-plane traversed counterclockwise, circle B through A's center
/// crossing the plane upward inside A), the result is +1.
pub fn crossing_link_number(a: &[Vec<f64>], b: &[Vec<f64>]) -> i64 {
    // fixed generic rotation so neither curve projects degenerately
    let rot = rotation(0.37, 0.73, 0.19);
    let a: Vec<[f64; 3]> = a.iter().map(|p| apply(&rot, p)).collect();
    let b: Vec<[f64; 3]> = b.iter().map(|p| apply(&rot, p)).collect();

    let mut total = 0i64;
    for i in 0..a.len() {
        let p = a[i];
        let p2 = a[(i + 1) % a.len()];
        let da = [p2[0] - p[0], p2[1] - p[1], p2[2] - p[2]];
        for j in 0..b.len() {
            let q = b[j];
            let q2 = b[(j + 1) % b.len()];
            let db = [q2[0] - q[0], q2[1] - q[1], q2[2] - q[2]];
            // solve p + s*da = q + t*db in the projection plane
            let det = da[0] * (-db[1]) - (-db[0]) * da[1];
            if det.abs() < 1e-12 {
                continue;
            }
            let rx = q[0] - p[0];
            let ry = q[1] - p[1];
            let s = (rx * (-db[1]) - (-db[0]) * ry) / det;
            let t = (da[0] * ry - da[1] * rx) / det;
            if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&t) {
                continue;
            }
            let za = p[2] + s * da[2];
            let zb = q[2] + t * db[2];
            let orientation = da[0] * db[1] - da[1] * db[0];
            let sign = if orientation > 0.0 { 1 } else { -1 };
            total += if za > zb { sign } else { -sign };
        }
    }
    assert!(total % 2 == 0, "crossing parity violated: {total}");
    total / 2
}

fn rotation(ax: f64, ay: f64, az: f64) -> [[f64; 3]; 3] {
    let (sx, cx) = ax.sin_cos();
    let (sy, cy) = ay.sin_cos();
    let (sz, cz) = az.sin_cos();
    let rx = [[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]];
    let ry = [[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]];
    let rz = [[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]];
    mat_mul(&mat_mul(&rx, &ry), &rz)
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn apply(m: &[[f64; 3]; 3], p: &[f64]) -> [f64; 3] {
    [
        m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
        m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
        m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
    ]
}

/// Exact relu flow: coordinates decouple, nonnegative ones are fixed and
/// negative ones contract as x e^{-t}.
pub fn relu_flow_exact(x: &[f64], t: f64) -> Vec<f64> {
    x.iter().map(|&v| if v >= 0.0 { v } else { v * (-t).exp() }).collect()
}
