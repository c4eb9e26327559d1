/// Adam with bias-corrected moment estimates over a fixed-size parameter vector.
#[derive(Debug, Clone)]
pub struct Adam<const N: usize> {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: [f64; N],
    v: [f64; N],
    // beta^t, kept as running products
    beta1_t: f64,
    beta2_t: f64,
}

impl<const N: usize> Adam<N> {
    pub fn new(lr: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        Self {
            lr,
            beta1,
            beta2,
            eps,
            m: [0.0; N],
            v: [0.0; N],
            beta1_t: 1.0,
            beta2_t: 1.0,
        }
    }

    pub fn step(&mut self, theta: &mut [f64; N], grad: &[f64; N]) {
        self.beta1_t *= self.beta1;
        self.beta2_t *= self.beta2;
        for i in 0..N {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / (1.0 - self.beta1_t);
            let v_hat = self.v[i] / (1.0 - self.beta2_t);
            theta[i] -= self.lr * m_hat / (libm::sqrt(v_hat) + self.eps);
        }
    }
}
