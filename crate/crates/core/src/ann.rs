//! Dense ReLU networks: storage, realization, architecture statistics and
//! parameter vectorization.

use rand::{Rng, RngExt};

use crate::error::{domain, shape, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(shape(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, lambda: f64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = lambda;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(shape(format!("row {} has {} entries, expected {}", i + 1, row.len(), c)));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Column vector.
    pub fn column(v: &[f64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Row vector.
    pub fn row(v: &[f64]) -> Self {
        Self { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row_slice(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row_slice(i).to_vec()).collect()
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| lambda * v).collect() }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0.0;
                for k in 0..self.cols {
                    acc += self.data[i * self.cols + k] * other.data[k * other.cols + j];
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(shape(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row_slice(i), x)).collect())
    }

    /// Block-diagonal matrix `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|m| m.rows).sum();
        let cols = blocks.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in blocks {
            for i in 0..m.rows {
                let dst = (r0 + i) * cols + c0;
                out.data[dst..dst + m.cols].copy_from_slice(m.row_slice(i));
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One affine layer `x -> W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub w: Matrix,
    pub b: Vec<f64>,
}

impl Layer {
    pub fn new(w: Matrix, b: Vec<f64>) -> Result<Self> {
        if b.len() != w.rows() {
            return Err(shape(format!("bias has length {}, expected {}", b.len(), w.rows())));
        }
        Ok(Self { w, b })
    }

    pub fn in_dim(&self) -> usize {
        self.w.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.w.rows()
    }

    pub fn param_count(&self) -> usize {
        self.w.rows() * (self.w.cols() + 1)
    }

    fn apply_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let c = self.w.cols();
        for (i, bi) in self.b.iter().enumerate() {
            out.push(dot(&self.w.data[i * c..(i + 1) * c], x) + bi);
        }
    }
}

/// Architecture summary of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    pub depth: usize,
    pub hidden_layers: usize,
    pub dims: Vec<usize>,
    pub inputs: usize,
    pub outputs: usize,
    pub params: usize,
}

/// Result of a forward pass. `hidden` holds the post-ReLU activation of
/// every hidden layer when recording was requested.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub output: Vec<f64>,
    pub hidden: Option<Vec<Vec<f64>>>,
}

/// Feed-forward ReLU network. ReLU acts after every layer but the last.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
}

#[inline]
pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Componentwise [`relu`].
pub fn relu_vec(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| relu(*v)).collect()
}

impl Network {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(shape("network needs at least one layer"));
        }
        for (k, layer) in layers.iter().enumerate() {
            if layer.b.len() != layer.w.rows() {
                return Err(shape(format!(
                    "layer {}: bias has length {}, expected {}",
                    k + 1,
                    layer.b.len(),
                    layer.w.rows()
                )));
            }
            if k > 0 && layer.in_dim() != layers[k - 1].out_dim() {
                return Err(shape(format!(
                    "layer {}: weight has {} columns, previous layer outputs {}",
                    k + 1,
                    layer.in_dim(),
                    layers[k - 1].out_dim()
                )));
            }
            if layer.w.rows() == 0 || layer.w.cols() == 0 {
                return Err(shape(format!("layer {}: zero-sized weight", k + 1)));
            }
            if layer.w.data().iter().chain(&layer.b).any(|v| !v.is_finite()) {
                return Err(domain(format!("layer {}: non-finite parameter", k + 1)));
            }
        }
        Ok(Self { layers })
    }

    /// Convenience constructor from `(W rows, b)` pairs.
    pub fn from_parts(parts: Vec<(Vec<Vec<f64>>, Vec<f64>)>) -> Result<Self> {
        let mut layers = Vec::with_capacity(parts.len());
        for (k, (w, b)) in parts.into_iter().enumerate() {
            let w = Matrix::from_rows(&w).map_err(|e| shape(format!("layer {}: {}", k + 1, e)))?;
            layers.push(Layer::new(w, b).map_err(|e| shape(format!("layer {}: {}", k + 1, e)))?);
        }
        Self::new(layers)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Layer> {
        self.layers
    }

    /// Number of affine layers L.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    /// `(l_0, ..., l_L)`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = Vec::with_capacity(self.layers.len() + 1);
        d.push(self.input_dim());
        d.extend(self.layers.iter().map(Layer::out_dim));
        d
    }

    /// `l_n`, zero past the output layer.
    pub fn dims_at(&self, n: usize) -> usize {
        match n {
            0 => self.input_dim(),
            n if n <= self.layers.len() => self.layers[n - 1].out_dim(),
            _ => 0,
        }
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Layer::param_count).sum()
    }

    /// Largest absolute parameter.
    pub fn inf_norm(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| l.b.iter().fold(l.w.max_abs(), |m, v| m.max(v.abs())))
            .fold(0.0, f64::max)
    }

    pub fn architecture(&self) -> Architecture {
        Architecture {
            depth: self.depth(),
            hidden_layers: self.hidden_layers(),
            dims: self.dims(),
            inputs: self.input_dim(),
            outputs: self.output_dim(),
            params: self.param_count(),
        }
    }

    pub fn realize(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(x, false)?.output)
    }

    /// Scalar realization for networks with one output.
    pub fn realize_scalar(&self, x: &[f64]) -> Result<f64> {
        if self.output_dim() != 1 {
            return Err(shape(format!("network has {} outputs, expected 1", self.output_dim())));
        }
        Ok(self.realize(x)?[0])
    }

    /// Forward pass, optionally recording hidden activations.
    pub fn forward(&self, x: &[f64], record: bool) -> Result<Forward> {
        self.check_input(x)?;
        let mut hidden = record.then(Vec::new);
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            layer.apply_into(&cur, &mut next);
            if k < last {
                next.iter_mut().for_each(|v| *v = relu(*v));
                if let Some(h) = hidden.as_mut() {
                    h.push(next.clone());
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(Forward { output: cur, hidden })
    }

    /// Allocation-free realization for hot loops. The caller supplies two
    /// scratch buffers; the returned slice borrows one of them.
    pub fn realize_with<'a>(&self, x: &[f64], a: &'a mut Vec<f64>, b: &'a mut Vec<f64>) -> &'a [f64] {
        debug_assert_eq!(x.len(), self.input_dim());
        a.clear();
        a.extend_from_slice(x);
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            layer.apply_into(a, b);
            if k < last {
                b.iter_mut().for_each(|v| *v = relu(*v));
            }
            std::mem::swap(a, b);
        }
        a
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(shape(format!("input has length {}, network expects {}", x.len(), self.input_dim())));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(domain("non-finite input"));
        }
        Ok(())
    }

    /// Parameters in layer order; within a layer, W row by row then b.
    pub fn vectorize(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            v.extend_from_slice(l.w.data());
            v.extend_from_slice(&l.b);
        }
        v
    }

    /// Inverse of [`Network::vectorize`] for the given dims.
    pub fn from_vector(dims: &[usize], v: &[f64]) -> Result<Self> {
        if dims.len() < 2 {
            return Err(shape("dims must list at least input and output width"));
        }
        let need: usize = dims.windows(2).map(|p| p[1] * (p[0] + 1)).sum();
        if v.len() != need {
            return Err(shape(format!("vector has {} entries, dims need {}", v.len(), need)));
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        let mut off = 0;
        for p in dims.windows(2) {
            let (i, o) = (p[0], p[1]);
            let w = Matrix::new(o, i, v[off..off + o * i].to_vec())?;
            off += o * i;
            let b = v[off..off + o].to_vec();
            off += o;
            layers.push(Layer::new(w, b)?);
        }
        Self::new(layers)
    }
}

/// Random network for property tests: widths uniform in `1..=6`, depth in
/// `1..=4`, entries uniform in `[-2, 2]`. Fixed input/output widths may be
/// requested.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, inputs: Option<usize>, outputs: Option<usize>) -> Network {
    let depth = rng.random_range(1..=4usize);
    let mut dims: Vec<usize> = (0..=depth).map(|_| rng.random_range(1..=6usize)).collect();
    if let Some(i) = inputs {
        dims[0] = i;
    }
    if let Some(o) = outputs {
        dims[depth] = o;
    }
    random_network_with_dims(rng, &dims)
}

/// Random network with the given dims and entries uniform in `[-2, 2]`.
pub fn random_network_with_dims<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Network {
    let n: usize = dims.windows(2).map(|p| p[1] * (p[0] + 1)).sum();
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
    Network::from_vector(dims, &v).expect("dims are positive")
}
