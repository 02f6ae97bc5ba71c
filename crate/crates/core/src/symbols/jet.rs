//! Truncated bivariate Taylor jets, used for exact derivatives of the
//! closed-form `η`-profiles.

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    // coefficient of δ₁^i δ₂^j at i * (order + 1) + j, for i + j ≤ order
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; (order + 1) * (order + 1)];
        c[0] = value;
        Self { order, c }
    }

    /// The coordinate `η_axis` expanded around `value`.
    pub fn variable(value: f64, axis: usize, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            let idx = if axis == 0 { order + 1 } else { 1 };
            j.c[idx] = 1.0;
        }
        j
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.c[i * (self.order + 1) + j]
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `∂^{α₁}_{1} ∂^{α₂}_{2}` at the expansion point.
    pub fn derivative(&self, alpha: [u32; 2]) -> f64 {
        let (i, j) = (alpha[0] as usize, alpha[1] as usize);
        if i + j > self.order {
            return f64::NAN;
        }
        self.at(i, j) * factorial(i) * factorial(j)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { order: self.order, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn add_const(&self, v: f64) -> Self {
        let mut r = self.clone();
        r.c[0] += v;
        r
    }

    pub fn scale(&self, v: f64) -> Self {
        Self { order: self.order, c: self.c.iter().map(|a| a * v).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order;
        let mut r = Self::constant(0.0, n);
        for i1 in 0..=n {
            for j1 in 0..=(n - i1) {
                let a = self.at(i1, j1);
                if a == 0.0 {
                    continue;
                }
                let rest = n - i1 - j1;
                for i2 in 0..=rest {
                    for j2 in 0..=(rest - i2) {
                        r.c[(i1 + i2) * (n + 1) + j1 + j2] += a * o.at(i2, j2);
                    }
                }
            }
        }
        r
    }

    /// `self^e` for a positive base value, by composing with the Taylor
    /// series of `u ↦ u^e`.
    pub fn powf(&self, e: f64) -> Self {
        let u0 = self.value();
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let mut result = Self::constant(u0.powf(e), self.order);
        let mut power = Self::constant(1.0, self.order);
        let mut coef = 1.0;
        for k in 1..=self.order {
            power = power.mul(&delta);
            coef *= (e - (k as f64 - 1.0)) / k as f64;
            result = result.add(&power.scale(coef * u0.powf(e - k as f64)));
        }
        result
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `⟨η⟩² = 1 + |η|²` as a jet at `eta`.
pub fn japanese_sq(eta: [f64; 2], dim: usize, order: usize) -> Jet {
    let mut acc = Jet::constant(1.0, order);
    for axis in 0..dim {
        let v = Jet::variable(eta[axis], axis, order);
        acc = acc.add(&v.mul(&v));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_variables() {
        let x = Jet::variable(2.0, 0, 3);
        let y = Jet::variable(-1.0, 1, 3);
        let p = x.mul(&x).mul(&y);
        // x² y at (2, -1)
        assert_eq!(p.value(), -4.0);
        assert_eq!(p.derivative([1, 0]), -4.0);
        assert_eq!(p.derivative([0, 1]), 4.0);
        assert_eq!(p.derivative([2, 1]), 2.0);
        assert_eq!(p.derivative([1, 1]), 4.0);
    }

    #[test]
    fn power_matches_closed_form_derivatives() {
        // f(t) = (1 + t²)^{1/2}, f' = t/f, f'' = 1/f³
        let t = 0.7;
        let j = japanese_sq([t, 0.0], 1, 3).powf(0.5);
        let f = (1.0 + t * t).sqrt();
        assert!((j.value() - f).abs() < 1e-15);
        assert!((j.derivative([1, 0]) - t / f).abs() < 1e-14);
        assert!((j.derivative([2, 0]) - 1.0 / f.powi(3)).abs() < 1e-14);
        assert!((j.derivative([3, 0]) + 3.0 * t / f.powi(5)).abs() < 1e-13);
    }
}
