//! Structural operations on networks: composition, powers, parallelization,
//! and the elementary identity, affine, scalar and sum networks.

use crate::ann::{Layer, Matrix, Network};
use crate::error::{param, shape, Result};

/// `f • g`: fuses the first layer of `f` with the last layer of `g`.
pub fn compose(f: &Network, g: &Network) -> Result<Network> {
    if f.input_dim() != g.output_dim() {
        return Err(shape(format!(
            "cannot compose: input dimension of f is {}, output dimension of g is {}",
            f.input_dim(),
            g.output_dim()
        )));
    }
    let fl = f.layers();
    let gl = g.layers();
    let (first, glast) = (&fl[0], &gl[gl.len() - 1]);
    let w = first.w.matmul(&glast.w)?;
    let b = first.w.matvec(&glast.b)?.iter().zip(&first.b).map(|(x, y)| x + y).collect();
    let mut layers = Vec::with_capacity(fl.len() + gl.len() - 1);
    layers.extend_from_slice(&gl[..gl.len() - 1]);
    layers.push(Layer::new(w, b)?);
    layers.extend_from_slice(&fl[1..]);
    Network::new(layers)
}

/// `f^{•n}`; `n = 0` gives the single affine identity layer.
pub fn power(f: &Network, n: usize) -> Result<Network> {
    if f.input_dim() != f.output_dim() {
        return Err(shape(format!(
            "power needs equal input and output dimension, got {} and {}",
            f.input_dim(),
            f.output_dim()
        )));
    }
    let mut acc = affine_net(Matrix::identity(f.output_dim()), vec![0.0; f.output_dim()])?;
    for _ in 0..n {
        acc = compose(f, &acc)?;
    }
    Ok(acc)
}

/// Parallelization of equal-depth networks: block-diagonal weights,
/// stacked biases.
pub fn parallelize(nets: &[&Network]) -> Result<Network> {
    let first = nets.first().ok_or_else(|| param("parallelize needs at least one network"))?;
    let depth = first.depth();
    if let Some(k) = nets.iter().position(|n| n.depth() != depth) {
        return Err(shape(format!(
            "network {} has depth {}, network 1 has depth {}",
            k + 1,
            nets[k].depth(),
            depth
        )));
    }
    let layers = (0..depth)
        .map(|l| {
            let ws: Vec<&Matrix> = nets.iter().map(|n| &n.layers()[l].w).collect();
            let b = nets.iter().flat_map(|n| n.layers()[l].b.iter().copied()).collect();
            Layer::new(Matrix::block_diag(&ws), b)
        })
        .collect::<Result<Vec<_>>>()?;
    Network::new(layers)
}

/// ReLU identity on `R^d`, dims `(d, 2d, d)`.
pub fn identity_net(d: usize) -> Result<Network> {
    if d == 0 {
        return Err(param("identity_net needs d >= 1"));
    }
    let one = Network::from_parts(vec![
        (vec![vec![1.0], vec![-1.0]], vec![0.0, 0.0]),
        (vec![vec![1.0, -1.0]], vec![0.0]),
    ])?;
    let copies = vec![&one; d];
    parallelize(&copies)
}

/// Single affine layer `x -> W x + B`.
pub fn affine_net(w: Matrix, b: Vec<f64>) -> Result<Network> {
    Network::new(vec![Layer::new(w, b)?])
}

/// `λ ⊛ f`.
pub fn scalar_mul(lambda: f64, f: &Network) -> Result<Network> {
    let o = f.output_dim();
    compose(&affine_net(Matrix::scaled_identity(o, lambda), vec![0.0; o])?, f)
}

/// Sums `n` blocks of `R^m`: `(x_1, ..., x_n) -> Σ x_k`.
pub fn sum_net(m: usize, n: usize) -> Result<Network> {
    if m == 0 || n == 0 {
        return Err(param("sum_net needs m, n >= 1"));
    }
    let mut w = Matrix::zeros(m, m * n).to_rows();
    for (i, row) in w.iter_mut().enumerate() {
        for k in 0..n {
            row[k * m + i] = 1.0;
        }
    }
    affine_net(Matrix::from_rows(&w)?, vec![0.0; m])
}
