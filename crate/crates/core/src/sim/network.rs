use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::realize::{realize, StateSpaceBlock};
use super::topology::Topology;
use crate::error::{Error, Result};
use crate::tf::{check_assumptions, AgentDynamics};
use crate::tolerances::Tolerances;

/// Exogenous input of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputId {
    /// Leader position `x_0`.
    Leader,
    /// Disturbance added to the input of the front block of agent `n`.
    Disturbance(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockRole {
    /// `M_f`, driven by the parent's position.
    Front,
    /// `M_r`, driven by one child's position.
    Rear { child: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInfo {
    pub agent: usize,
    pub role: BlockRole,
    /// Offset of the block state in the stacked network state.
    pub offset: usize,
}

/// Linear system `z' = A z + B w`, `x = C z + D w` of the whole platoon, with
/// `w = (x_0, Δ_1, ..., Δ_N)` and `x = (x_1, ..., x_N)`.
#[derive(Debug, Clone)]
pub struct NetworkSystem {
    topology: Topology,
    blocks: Vec<BlockInfo>,
    a: CsrMatrix<f64>,
    b: DMatrix<f64>,
    c: CsrMatrix<f64>,
    d: DMatrix<f64>,
}

fn csr_from_dense(m: &DMatrix<f64>) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != 0.0 {
                coo.push(i, j, v);
            }
        }
    }
    CsrMatrix::from(&coo)
}

fn csr_to_dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        out[(i, j)] = *v;
    }
    out
}

/// Assembles the platoon. Every follower owns an `M_f` block facing its
/// parent and one `M_r` block per child; its position is the sum of the block
/// outputs. Each block input is `x_neighbour - x_own - h v_own`, and the
/// disturbance of agent `n` is added to its `M_f` input.
pub fn build_network(topology: &Topology, d: &AgentDynamics) -> Result<NetworkSystem> {
    let report = check_assumptions(d, Tolerances::default().tol_crhp);
    if !report.passes() {
        return Err(Error::AssumptionViolated(report.violations.join("; ")));
    }
    if topology.n_agents() < 3 {
        return Err(Error::InvalidTopology(format!(
            "at least 3 followers required, got {}",
            topology.n_agents()
        )));
    }
    let front = realize(&d.mf)?;
    let rear = realize(&d.mr)?;
    if d.h != 0.0 && (front.d != 0.0 || rear.d != 0.0) {
        return Err(Error::HeadwayRequiresStrictlyProper);
    }

    let n_agents = topology.n_agents();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for agent in 1..=n_agents {
        blocks.push(BlockInfo {
            agent,
            role: BlockRole::Front,
            offset,
        });
        offset += front.dim();
        for &child in topology.children(agent) {
            blocks.push(BlockInfo {
                agent,
                role: BlockRole::Rear { child },
                offset,
            });
            offset += rear.dim();
        }
    }
    let n_states = offset;
    let n_blocks = blocks.len();
    let n_inputs = n_agents + 1;
    let block_of = |info: &BlockInfo| -> &StateSpaceBlock {
        match info.role {
            BlockRole::Front => &front,
            BlockRole::Rear { .. } => &rear,
        }
    };

    // Block-diagonal pieces: stacked dynamics, input vectors, position rows,
    // velocity rows and the two feedthrough diagonals.
    let mut a_blk = DMatrix::zeros(n_states, n_states);
    let mut b_blk = DMatrix::zeros(n_states, n_blocks);
    let mut c_blk = DMatrix::zeros(n_blocks, n_states);
    let mut v_blk = DMatrix::zeros(n_blocks, n_states);
    let mut d_diag = DVector::zeros(n_blocks);
    let mut w_diag = DVector::zeros(n_blocks);
    for (k, info) in blocks.iter().enumerate() {
        let blk = block_of(info);
        let (o, m) = (info.offset, blk.dim());
        a_blk.view_mut((o, o), (m, m)).copy_from(&blk.a);
        b_blk.view_mut((o, k), (m, 1)).copy_from(&blk.b);
        c_blk.view_mut((k, o), (1, m)).copy_from(&blk.c.transpose());
        let ca = blk.c.transpose() * &blk.a;
        v_blk.view_mut((k, o), (1, m)).copy_from(&ca);
        d_diag[k] = blk.d;
        w_diag[k] = blk.c.dot(&blk.b);
    }

    // Agent sums (S), block coupling to positions (P), own-velocity selector
    // (Q) and exogenous input map (E).
    let mut s_mat = DMatrix::zeros(n_agents, n_blocks);
    let mut p_mat = DMatrix::zeros(n_blocks, n_agents);
    let mut q_mat = DMatrix::zeros(n_blocks, n_agents);
    let mut e_mat = DMatrix::zeros(n_blocks, n_inputs);
    for (k, info) in blocks.iter().enumerate() {
        let own = info.agent - 1;
        s_mat[(own, k)] = 1.0;
        p_mat[(k, own)] -= 1.0;
        q_mat[(k, own)] = 1.0;
        match info.role {
            BlockRole::Front => {
                match topology.parent(info.agent) {
                    Some(0) => e_mat[(k, 0)] = 1.0,
                    Some(parent) => p_mat[(k, parent - 1)] += 1.0,
                    None => unreachable!("followers always have a parent"),
                }
                e_mat[(k, info.agent)] = 1.0;
            }
            BlockRole::Rear { child } => p_mat[(k, child - 1)] += 1.0,
        }
    }

    // u = P S (C z + D u) - h Q S (V z + W u) + E w
    let ps = &p_mat * &s_mat;
    let qs = &q_mat * &s_mat;
    let mut m = DMatrix::<f64>::identity(n_blocks, n_blocks);
    m -= &ps * DMatrix::from_diagonal(&d_diag);
    m += d.h * (&qs * DMatrix::from_diagonal(&w_diag));
    let rhs_z = &ps * &c_blk - d.h * (&qs * &v_blk);
    let lu = m.lu();
    let k_mat = lu
        .solve(&rhs_z)
        .ok_or_else(|| Error::SingularSolve("block input equations are singular".into()))?;
    let j_mat = lu
        .solve(&e_mat)
        .ok_or_else(|| Error::SingularSolve("block input equations are singular".into()))?;

    let a_net = &a_blk + &b_blk * &k_mat;
    let b_net = &b_blk * &j_mat;
    let d_diag_m = DMatrix::from_diagonal(&d_diag);
    let c_net = &s_mat * (&c_blk + &d_diag_m * &k_mat);
    let d_net = &s_mat * &d_diag_m * &j_mat;

    Ok(NetworkSystem {
        topology: topology.clone(),
        blocks,
        a: csr_from_dense(&a_net),
        b: b_net,
        c: csr_from_dense(&c_net),
        d: d_net,
    })
}

impl NetworkSystem {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn blocks(&self) -> &[BlockInfo] {
        &self.blocks
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_agents(&self) -> usize {
        self.topology.n_agents()
    }

    pub fn a(&self) -> &CsrMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &CsrMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn input_index(&self, input: InputId) -> Result<usize> {
        match input {
            InputId::Leader => Ok(0),
            InputId::Disturbance(n) if (1..=self.n_agents()).contains(&n) => Ok(n),
            InputId::Disturbance(n) => Err(Error::AgentIndex {
                index: n,
                max: self.n_agents(),
            }),
        }
    }

    /// Transfer function value from `from` to the position of agent `to`
    /// (0 is the leader) at `s`, by a dense solve with `sI - A`.
    pub fn frequency_response(&self, from: InputId, to: usize, s: Complex64) -> Result<Complex64> {
        let col = self.input_index(from)?;
        if to > self.n_agents() {
            return Err(Error::AgentIndex {
                index: to,
                max: self.n_agents(),
            });
        }
        if to == 0 {
            let v = if from == InputId::Leader { 1.0 } else { 0.0 };
            return Ok(Complex64::new(v, 0.0));
        }
        let n = self.n_states();
        let mut m = csr_to_dense(&self.a).map(|v| Complex64::new(-v, 0.0));
        for i in 0..n {
            m[(i, i)] += s;
        }
        let rhs = DVector::from_fn(n, |i, _| Complex64::new(self.b[(i, col)], 0.0));
        let x = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSolve(format!("sI - A singular at s = {s}")))?;
        let row = to - 1;
        let mut y = Complex64::new(self.d[(row, col)], 0.0);
        for (j, v) in self.c.row(row).col_indices().iter().zip(self.c.row(row).values()) {
            y += x[*j] * *v;
        }
        Ok(y)
    }
}
