//! Worker-parallel poset construction. `WITCH_THREADS` caps the number of workers.

use rayon::prelude::*;
use witch_core::strata::{check_w_scale, w_order_row, Relation, StratumPoset};
use witch_core::treepair::{all_tree_pairs, TreePair};

use crate::error::{Result, WitchError};

pub const THREADS_VAR: &str = "WITCH_THREADS";

/// Worker count from `WITCH_THREADS`; `None` leaves the choice to rayon.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(k) => Ok(Some(k)),
            Err(_) => Err(WitchError::Usage(format!("{THREADS_VAR} must be a non-negative integer, got {s:?}"))),
        },
    }
}

pub fn with_pool<T: Send>(job: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_cap()? {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| WitchError::Usage(e.to_string()))?;
    Ok(pool.install(job))
}

/// Same poset as `witch_core::strata::enumerate_w`, with order rows computed in parallel.
pub fn enumerate_w(n: &[usize]) -> Result<StratumPoset<TreePair>> {
    check_w_scale(n)?;
    let elements = all_tree_pairs(n);
    let dims: Vec<usize> = elements.iter().map(TreePair::dimension).collect();
    let rows = (0..elements.len()).into_par_iter().map(|a| w_order_row(&elements, &dims, a)).collect();
    Ok(StratumPoset::from_order(elements, dims, Relation::from_rows(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_the_sequential_poset() {
        for n in [vec![1, 1, 0], vec![2, 1], vec![0, 2, 0]] {
            let par = with_pool(|| enumerate_w(&n)).unwrap().unwrap();
            let seq = witch_core::strata::enumerate_w(&n).unwrap();
            assert_eq!(par.elements, seq.elements);
            assert_eq!(par.covers, seq.covers);
        }
    }
}
