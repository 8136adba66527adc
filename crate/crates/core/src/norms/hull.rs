use crate::error::{Error, Result};
use crate::riesz::Vector;
use crate::linalg::solve;

use super::HullOfPieces;

/// A compact convex symmetric piece of a hull norm's unit ball.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    /// The ellipse `{(x_i/a)² + (x_j/b)² ≤ 1}` in the coordinate plane `(i, j)`.
    Disk { axes: (usize, usize), radii: (f64, f64) },
    /// Convex hull of the given points and their negatives.
    Points(Vec<Vector<f64>>),
}

impl Piece {
    /// Support function `max ⟨f, u⟩` over the piece.
    pub fn support(&self, f: &[f64]) -> f64 {
        match self {
            Piece::Disk { axes: (i, j), radii: (a, b) } => (a * f[*i]).hypot(b * f[*j]),
            Piece::Points(ps) => ps
                .iter()
                .map(|p| p.coords().iter().zip(f).map(|(u, v)| u * v).sum::<f64>().abs())
                .fold(0.0, f64::max),
        }
    }

    /// A point of the piece attaining the support function at `f`.
    pub fn maximizer(&self, f: &Vector<f64>) -> Vector<f64> {
        match self {
            Piece::Disk { axes: (i, j), radii: (a, b) } => {
                let mut c = vec![0.0; f.dim()];
                let h = self.support(f.coords());
                if h > 0.0 {
                    c[*i] = a * a * f[*i] / h;
                    c[*j] = b * b * f[*j] / h;
                } else {
                    c[*i] = *a;
                }
                Vector::new(c)
            }
            Piece::Points(ps) => {
                let mut best = (f64::NEG_INFINITY, &ps[0], 1.0);
                for p in ps {
                    let d = p.dot(f);
                    if d.abs() > best.0 {
                        best = (d.abs(), p, if d < 0.0 { -1.0 } else { 1.0 });
                    }
                }
                best.2 * best.1
            }
        }
    }
}

pub(crate) fn validate(dim: usize, pieces: &[Piece]) -> Result<()> {
    if dim == 0 || pieces.is_empty() {
        return Err(Error::InvalidSpec("hull norm needs a positive dimension and at least one piece".into()));
    }
    let mut covered = vec![false; dim];
    let mut rows = Vec::new();
    for piece in pieces {
        match piece {
            Piece::Disk { axes: (i, j), radii: (a, b) } => {
                if *i >= dim || *j >= dim || i == j {
                    return Err(Error::InvalidSpec(format!("disk axes ({i}, {j}) invalid in dimension {dim}")));
                }
                if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidSpec("disk radii must be positive".into()));
                }
                covered[*i] = true;
                covered[*j] = true;
            }
            Piece::Points(ps) => {
                if ps.is_empty() {
                    return Err(Error::InvalidSpec("empty point piece".into()));
                }
                for p in ps {
                    crate::riesz::check_dims(dim, p.dim())?;
                    rows.push(p.coords().to_vec());
                }
            }
        }
    }
    for (i, c) in covered.iter().enumerate() {
        if *c {
            rows.push(Vector::<f64>::basis(dim, i).into_coords());
        }
    }
    if crate::linalg::rank(&rows, &1e-12) < dim {
        return Err(Error::NonSpanning);
    }
    Ok(())
}

impl HullOfPieces {
    /// Support function of the unit ball, i.e. the dual norm.
    pub(crate) fn support(&self, f: &Vector<f64>) -> f64 {
        self.support_slice(f.coords())
    }

    fn support_slice(&self, f: &[f64]) -> f64 {
        self.pieces.iter().map(|p| p.support(f)).fold(0.0, f64::max)
    }

    pub(crate) fn gauge(&self, x: &Vector<f64>) -> Result<f64> {
        Ok(self.gauge_and_functional(x)?.map_or(0.0, |(g, _)| g))
    }

    /// The gauge together with a unit supporting functional. The gauge of
    /// `x` is `1 / min{h(f) : ⟨f, x⟩ = 1}`, minimized over the hyperplane
    /// by nested golden section.
    pub(crate) fn gauge_and_functional(&self, x: &Vector<f64>) -> Result<Option<(f64, Vector<f64>)>> {
        let len = x.norm2();
        if len == 0.0 {
            return Ok(None);
        }
        if !len.is_finite() {
            return Err(Error::InvalidSpec("non-finite input".into()));
        }
        let xs: Vec<f64> = x.coords().iter().map(|c| c / len).collect();
        let f = self.dual_barrier(&xs);
        let h = self.support_slice(&f);
        if !(h > 0.0) {
            return Err(Error::InvalidSpec("hull norm is degenerate".into()));
        }
        let f = Vector::new(f.into_iter().map(|c| c / h).collect());
        Ok(Some((f.dot(x), f)))
    }

    /// Maximizes `⟨x, f⟩` over the dual ball `{f : h(f) ≤ 1}` by a
    /// log-barrier path-following Newton method.
    fn dual_barrier(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let cons = self.constraints(n);
        let m = cons.len() as f64;
        let mut f = vec![0.0; n];
        let mut t = 1.0;
        loop {
            for _ in 0..MAX_NEWTON {
                let (grad, hess) = barrier_derivatives(&cons, x, &f, t);
                let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
                let Some(step) = solve(&hess, &rhs, &0.0) else { break };
                let decrement: f64 = -grad.iter().zip(&step).map(|(g, s)| g * s).sum::<f64>();
                if decrement < 1e-11 {
                    break;
                }
                let mut s = 1.0;
                let mut moved = false;
                for _ in 0..60 {
                    if let Some(change) = barrier_change(&cons, x, &f, &step, s, t) {
                        if change <= -0.25 * s * decrement {
                            f.iter_mut().zip(&step).for_each(|(a, d)| *a += s * d);
                            moved = true;
                            break;
                        }
                    }
                    s *= 0.5;
                }
                if !moved || s < 1e-3 {
                    break;
                }
            }
            if m / t < BARRIER_GAP {
                return f;
            }
            t *= BARRIER_GROWTH;
        }
    }

    fn constraints(&self, n: usize) -> Vec<Constraint> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            match piece {
                Piece::Disk { axes, radii } => out.push(Constraint::Ellipse { axes: *axes, w: (radii.0 * radii.0, radii.1 * radii.1) }),
                Piece::Points(ps) => {
                    for p in ps {
                        debug_assert_eq!(p.dim(), n);
                        out.push(Constraint::Half(p.coords().to_vec()));
                        out.push(Constraint::Half(p.coords().iter().map(|c| -c).collect()));
                    }
                }
            }
        }
        out
    }

    /// A unit vector `x` with `⟨f, x⟩ = ‖f‖*`.
    pub(crate) fn attaining(&self, f: &Vector<f64>) -> Vector<f64> {
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, p) in self.pieces.iter().enumerate() {
            let s = p.support(f.coords());
            if s > best.0 {
                best = (s, k);
            }
        }
        self.pieces[best.1].maximizer(f)
    }
}

const MAX_NEWTON: usize = 25;
const BARRIER_GAP: f64 = 1e-11;
const BARRIER_GROWTH: f64 = 50.0;

/// `q(f) ≤ 1` with `q` a weighted sum of two squares, or `⟨p, f⟩ ≤ 1`.
enum Constraint {
    Ellipse { axes: (usize, usize), w: (f64, f64) },
    Half(Vec<f64>),
}

impl Constraint {
    fn slack(&self, f: &[f64]) -> f64 {
        match self {
            Constraint::Ellipse { axes: (i, j), w: (a, b) } => 1.0 - a * f[*i] * f[*i] - b * f[*j] * f[*j],
            Constraint::Half(p) => 1.0 - p.iter().zip(f).map(|(u, v)| u * v).sum::<f64>(),
        }
    }
}

/// Change of the barrier objective from `f` to `f + s·d`, computed
/// without forming the (large) objective values themselves.
fn barrier_change(cons: &[Constraint], x: &[f64], f: &[f64], d: &[f64], s: f64, t: f64) -> Option<f64> {
    let cand: Vec<f64> = f.iter().zip(d).map(|(a, b)| a + s * b).collect();
    let mut v = -t * s * x.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
    for c in cons {
        let after = c.slack(&cand);
        if after <= 0.0 {
            return None;
        }
        v -= (after / c.slack(f)).ln();
    }
    Some(v)
}

fn barrier_derivatives(cons: &[Constraint], x: &[f64], f: &[f64], t: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = x.len();
    let mut grad: Vec<f64> = x.iter().map(|c| -t * c).collect();
    let mut hess = vec![vec![0.0; n]; n];
    for c in cons {
        let s = c.slack(f);
        match c {
            Constraint::Ellipse { axes: (i, j), w: (a, b) } => {
                // slack = 1 − q, ∇q = (2a f_i, 2b f_j)
                let gi = 2.0 * a * f[*i];
                let gj = 2.0 * b * f[*j];
                grad[*i] += gi / s;
                grad[*j] += gj / s;
                hess[*i][*i] += 2.0 * a / s + gi * gi / (s * s);
                hess[*j][*j] += 2.0 * b / s + gj * gj / (s * s);
                hess[*i][*j] += gi * gj / (s * s);
                hess[*j][*i] += gi * gj / (s * s);
            }
            Constraint::Half(p) => {
                for r in 0..n {
                    grad[r] += p[r] / s;
                    for q in 0..n {
                        hess[r][q] += p[r] * p[q] / (s * s);
                    }
                }
            }
        }
    }
    (grad, hess)
}
