// SPDX-License-Identifier: Apache-2.0

//! Cell bookkeeping for M'_h. Blocks and levels are 0-based here: block `u`
//! is M_{u+1}, and the column block filled from block `u` (u ≥ 1) is the one
//! the construction calls D_{·, h−u}.

use std::ops::Range;

use super::plan::StaircasePlan;
use crate::matrix::Matrix;

/// Row-major copy of one source rectangle into one target rectangle of equal
/// area.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub source_block: usize,
    pub src_rows: Range<usize>,
    pub src_cols: Range<usize>,
    pub dst_rows: Range<usize>,
    pub dst_cols: Range<usize>,
}

impl Fold {
    fn cells(&self) -> usize {
        self.src_rows.len() * self.src_cols.len()
    }

    fn positions(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        let sw = self.src_cols.len();
        let dw = self.dst_cols.len();
        (0..self.cells()).map(move |c| {
            (
                (self.src_rows.start + c / sw, self.src_cols.start + c % sw),
                (self.dst_rows.start + c / dw, self.dst_cols.start + c % dw),
            )
        })
    }

    /// Copies source cells into their target positions.
    pub fn apply<E: Clone>(&self, m: &mut Matrix<E>) {
        for ((sr, sc), (dr, dc)) in self.positions() {
            let v = m.get(sr, sc).clone();
            m.set(dr, dc, v);
        }
    }

    /// Reads target cells back into the source rectangle.
    pub fn unapply<E: Clone>(&self, m: &mut Matrix<E>) {
        for ((sr, sc), (dr, dc)) in self.positions() {
            let v = m.get(dr, dc).clone();
            m.set(sr, sc, v);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    /// Rows of M_{u+1} inside M'_h.
    pub blocks: Vec<Range<usize>>,
    /// Columns of R and S inside every M_u.
    pub r_cols: Range<usize>,
    pub s_cols: Range<usize>,
    /// `folds[u]` is the fold whose source is block `u`; none for block 0.
    pub folds: Vec<Option<Fold>>,
    pub width: usize,
}

impl BlockLayout {
    pub fn new(plan: &StaircasePlan) -> Self {
        let h = plan.h();
        let k2 = plan.k2;
        let a = &plan.alpha_list;
        let blocks = (0..h)
            .map(|u| {
                let s = plan.block_start(u);
                s..s + plan.p_list[u]
            })
            .collect();
        let folds = (0..h)
            .map(|u| {
                (u > 0).then(|| {
                    let start = plan.block_start(u);
                    Fold {
                        source_block: u,
                        src_rows: start..start + plan.p_list[u],
                        src_cols: k2..k2 + a[u],
                        dst_rows: 0..plan.prefix_rows(u - 1),
                        dst_cols: k2 + a[u]..k2 + a[u - 1],
                    }
                })
            })
            .collect();
        BlockLayout {
            blocks,
            r_cols: 0..k2,
            s_cols: k2..k2 + plan.ell,
            folds,
            width: plan.k_list[0],
        }
    }

    /// Columns of block `u` that may be nonzero: [0, k^(u+1)).
    pub fn live_cols(&self, plan: &StaircasePlan, u: usize) -> Range<usize> {
        0..plan.k_list[u]
    }
}
