//! Forward-mode Taylor jets of order four.
//!
//! A `Jet5` carries the scaled Taylor coefficients `f(x), f'(x), f''(x)/2!,
//! f'''(x)/3!, f''''(x)/4!` of a function at a point. Arithmetic on jets is
//! exact differentiation of the corresponding closed forms, so window
//! derivatives computed this way carry no truncation error.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet5 {
    pub c: [f64; 5],
}

const FACTORIAL: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl Jet5 {
    pub fn constant(v: f64) -> Self {
        Self {
            c: [v, 0.0, 0.0, 0.0, 0.0],
        }
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        Self {
            c: [x, 1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `j`-th derivative, `j <= 4`.
    pub fn derivative(&self, j: usize) -> f64 {
        self.c[j] * FACTORIAL[j]
    }

    pub fn add(&self, o: &Jet5) -> Jet5 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            c[i] = self.c[i] + o.c[i];
        }
        Jet5 { c }
    }

    pub fn sub(&self, o: &Jet5) -> Jet5 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            c[i] = self.c[i] - o.c[i];
        }
        Jet5 { c }
    }

    pub fn neg(&self) -> Jet5 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            c[i] = -self.c[i];
        }
        Jet5 { c }
    }

    pub fn scale(&self, k: f64) -> Jet5 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            c[i] = k * self.c[i];
        }
        Jet5 { c }
    }

    pub fn mul(&self, o: &Jet5) -> Jet5 {
        let mut c = [0.0; 5];
        for i in 0..5 {
            for j in 0..=i {
                c[i] += self.c[j] * o.c[i - j];
            }
        }
        Jet5 { c }
    }

    /// Reciprocal jet; requires a nonzero value.
    pub fn recip(&self) -> Jet5 {
        let a = &self.c;
        debug_assert!(a[0] != 0.0);
        let mut b = [0.0; 5];
        b[0] = 1.0 / a[0];
        for i in 1..5 {
            let mut s = 0.0;
            for j in 1..=i {
                s += a[j] * b[i - j];
            }
            b[i] = -s / a[0];
        }
        Jet5 { c: b }
    }

    pub fn div(&self, o: &Jet5) -> Jet5 {
        self.mul(&o.recip())
    }

    /// `exp` of the jet via `w' = w v'`, i.e. `k w_k = sum_j j v_j w_{k-j}`.
    pub fn exp(&self) -> Jet5 {
        let v = &self.c;
        let mut w = [0.0; 5];
        w[0] = v[0].exp();
        for k in 1..5 {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * v[j] * w[k - j];
            }
            w[k] = s / k as f64;
        }
        Jet5 { c: w }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }
}
