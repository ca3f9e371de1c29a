//! Small dense complex matrices, written independently of the library oracle.

use num_complex::Complex64;
use pauliflow::{Gate, Pauli, Rotation, SignedPauliString};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![c(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn from(n: usize, v: &[Complex64]) -> Self {
        Mat { n, a: v.to_vec() }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let n = self.n * o.n;
        let mut m = Mat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        m.a[(i * o.n + k) * n + j * o.n + l] = self.get(i, j) * o.get(k, l);
                    }
                }
            }
        }
        m
    }

    pub fn max_diff(&self, o: &Mat) -> f64 {
        self.a.iter().zip(&o.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Equal up to a global phase taken from the largest entry of `o`.
    pub fn eq_up_to_phase(&self, o: &Mat, tol: f64) -> bool {
        let (k, _) = o
            .a
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .unwrap();
        if o.a[k].norm() < 1e-12 {
            return self.a.iter().all(|x| x.norm() <= tol);
        }
        let ph = self.a[k] / o.a[k];
        if (ph.norm() - 1.0).abs() > tol {
            return false;
        }
        self.max_diff(&o.scale(ph)) <= tol
    }
}

pub fn pauli(p: Pauli) -> Mat {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match p {
        Pauli::I => Mat::identity(2),
        Pauli::X => Mat::from(2, &[z, o, o, z]),
        Pauli::Y => Mat::from(2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Pauli::Z => Mat::from(2, &[o, z, z, -o]),
    }
}

/// Matrix of a signed string over `qubits`, first qubit most significant.
pub fn string(s: &SignedPauliString, qubits: &[&str]) -> Mat {
    let mut m = Mat::identity(1);
    for q in qubits {
        m = m.kron(&pauli(s.get(q)));
    }
    let ph = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][s.phase().exponent() as usize];
    m.scale(ph)
}

/// `exp(i theta/2 P)` for Hermitian `P`.
pub fn rotation(r: &Rotation, qubits: &[&str]) -> Mat {
    let t = r.angle.radians() / 2.0;
    let n = 1 << qubits.len();
    Mat::identity(n).scale(c(t.cos(), 0.0)).add(&string(&r.string, qubits).scale(c(0.0, t.sin())))
}

fn on(qubits: &[&str], q: &str, m: &Mat) -> Mat {
    let mut out = Mat::identity(1);
    for w in qubits {
        let f = if *w == q { m.clone() } else { Mat::identity(2) };
        out = out.kron(&f);
    }
    out
}

/// Permutation or diagonal action of a gate on computational basis states.
fn basis_map(qubits: &[&str], f: impl Fn(&mut Vec<bool>) -> Complex64) -> Mat {
    let n = qubits.len();
    let mut m = Mat::zeros(1 << n);
    for col in 0..1usize << n {
        let mut bits: Vec<bool> = (0..n).map(|k| (col >> (n - 1 - k)) & 1 == 1).collect();
        let amp = f(&mut bits);
        let row = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        m.a[row * m.n + col] = amp;
    }
    m
}

/// Textbook matrix of a gate on `qubits`.
pub fn gate(g: &Gate, qubits: &[&str]) -> Mat {
    let idx = |q: &String| qubits.iter().position(|w| w == q).unwrap();
    let one = c(1.0, 0.0);
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::H(q) => on(qubits, q, &Mat::from(2, &[c(s2, 0.0), c(s2, 0.0), c(s2, 0.0), c(-s2, 0.0)])),
        Gate::S(q) => on(qubits, q, &Mat::from(2, &[one, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])),
        Gate::Sdg(q) => on(qubits, q, &Mat::from(2, &[one, c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)])),
        Gate::X(q) => on(qubits, q, &pauli(Pauli::X)),
        Gate::Z(q) => on(qubits, q, &pauli(Pauli::Z)),
        Gate::RZ(q, a) => {
            let t = a.radians() / 2.0;
            on(qubits, q, &Mat::from(2, &[c(t.cos(), -t.sin()), c(0.0, 0.0), c(0.0, 0.0), c(t.cos(), t.sin())]))
        }
        Gate::RX(q, a) => {
            let t = a.radians() / 2.0;
            let (co, si) = (c(t.cos(), 0.0), c(0.0, -t.sin()));
            on(qubits, q, &Mat::from(2, &[co, si, si, co]))
        }
        Gate::CX(a, b) => {
            let (i, j) = (idx(a), idx(b));
            basis_map(qubits, |bits| {
                bits[j] ^= bits[i];
                one
            })
        }
        Gate::CZ(a, b) => {
            let (i, j) = (idx(a), idx(b));
            basis_map(qubits, |bits| if bits[i] && bits[j] { -one } else { one })
        }
        Gate::CCX(a, b, t) => {
            let (i, j, k) = (idx(a), idx(b), idx(t));
            basis_map(qubits, |bits| {
                bits[k] ^= bits[i] && bits[j];
                one
            })
        }
        Gate::Exp(r) => rotation(r, qubits),
        Gate::Init0(_) => panic!("not unitary"),
    }
}
