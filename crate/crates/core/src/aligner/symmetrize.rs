use std::collections::BTreeSet;
use std::str::FromStr;

use crate::corpus::AlignmentLinks;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    Intersection,
    Union,
    GrowDiagFinalAnd,
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "intersection" | "intersect" => Ok(Heuristic::Intersection),
            "union" => Ok(Heuristic::Union),
            "grow-diag-final-and" => Ok(Heuristic::GrowDiagFinalAnd),
            _ => Err(Error::InvalidInput(format!("unknown symmetrization heuristic {s:?}"))),
        }
    }
}

const NEIGHBOURS: [(isize, isize); 8] = [
    (-1, 0),
    (0, -1),
    (1, 0),
    (0, 1),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

/// Combines two directional alignments of the same sentence pair. Both are
/// given as (source, target) links.
pub fn symmetrize(forward: &AlignmentLinks, reverse: &AlignmentLinks, heuristic: Heuristic) -> AlignmentLinks {
    let f: BTreeSet<(usize, usize)> = forward.iter().collect();
    let r: BTreeSet<(usize, usize)> = reverse.iter().collect();
    match heuristic {
        Heuristic::Intersection => f.intersection(&r).copied().collect(),
        Heuristic::Union => f.union(&r).copied().collect(),
        Heuristic::GrowDiagFinalAnd => grow_diag_final_and(&f, &r),
    }
}

fn grow_diag_final_and(f: &BTreeSet<(usize, usize)>, r: &BTreeSet<(usize, usize)>) -> AlignmentLinks {
    let union: BTreeSet<_> = f.union(r).copied().collect();
    let mut links: BTreeSet<_> = f.intersection(r).copied().collect();
    let src_len = union.iter().map(|&(s, _)| s + 1).max().unwrap_or(0);
    let tgt_len = union.iter().map(|&(_, t)| t + 1).max().unwrap_or(0);
    let mut src_aligned = vec![false; src_len];
    let mut tgt_aligned = vec![false; tgt_len];
    for &(s, t) in &links {
        src_aligned[s] = true;
        tgt_aligned[t] = true;
    }

    // grow-diag
    loop {
        let mut added = false;
        for t in 0..tgt_len {
            for s in 0..src_len {
                if !links.contains(&(s, t)) {
                    continue;
                }
                for (ds, dt) in NEIGHBOURS {
                    let (Some(ns), Some(nt)) = (s.checked_add_signed(ds), t.checked_add_signed(dt)) else {
                        continue;
                    };
                    if ns >= src_len || nt >= tgt_len {
                        continue;
                    }
                    if (!src_aligned[ns] || !tgt_aligned[nt]) && union.contains(&(ns, nt)) {
                        links.insert((ns, nt));
                        src_aligned[ns] = true;
                        tgt_aligned[nt] = true;
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    // final-and, forward direction first
    for directional in [f, r] {
        for t in 0..tgt_len {
            for s in 0..src_len {
                if !src_aligned[s] && !tgt_aligned[t] && directional.contains(&(s, t)) {
                    links.insert((s, t));
                    src_aligned[s] = true;
                    tgt_aligned[t] = true;
                }
            }
        }
    }
    links.into_iter().collect()
}
