//! Finite differences on uniform nodes: second-order centered with second-order one-sided
//! closures, plus a fourth-order first derivative used by a few consistency checks.

use ndarray::{Array1, Array2, ArrayView1, Axis, Zip};

pub fn d1(f: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let n = f.len();
    let mut out = Array1::zeros(n);
    if n < 3 {
        if n == 2 {
            let s = (f[1] - f[0]) / h;
            out.fill(s);
        }
        return out;
    }
    let c = 0.5 / h;
    out[0] = c * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
    for i in 1..n - 1 {
        out[i] = c * (f[i + 1] - f[i - 1]);
    }
    out[n - 1] = c * (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]);
    out
}

pub fn d2(f: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let n = f.len();
    let mut out = Array1::zeros(n);
    if n < 3 {
        return out;
    }
    let c = 1.0 / (h * h);
    for i in 1..n - 1 {
        out[i] = c * (f[i + 1] - 2.0 * f[i] + f[i - 1]);
    }
    if n >= 4 {
        out[0] = c * (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]);
        out[n - 1] = c * (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]);
    } else {
        out[0] = out[1];
        out[n - 1] = out[1];
    }
    out
}

/// Fourth-order first derivative (five-point stencils, skewed near the ends).
pub fn d1_fourth(f: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let n = f.len();
    if n < 5 {
        return d1(f, h);
    }
    let c = 1.0 / (12.0 * h);
    let mut out = Array1::zeros(n);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    let m = n - 1;
    out[m - 1] = -c * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    out[m] = -c * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    out
}

fn along(f: &Array2<f64>, axis: usize, op: impl Fn(ArrayView1<f64>) -> Array1<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(f.dim());
    Zip::from(out.lanes_mut(Axis(axis)))
        .and(f.lanes(Axis(axis)))
        .for_each(|mut o, l| o.assign(&op(l)));
    out
}

pub fn dr(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 0, |l| d1(l, h))
}

pub fn dtheta(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 1, |l| d1(l, h))
}

pub fn drr(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 0, |l| d2(l, h))
}

pub fn dtt(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 1, |l| d2(l, h))
}

pub fn dr_fourth(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 0, |l| d1_fourth(l, h))
}

pub fn dtheta_fourth(f: &Array2<f64>, h: f64) -> Array2<f64> {
    along(f, 1, |l| d1_fourth(l, h))
}
