//! Zigzag words reduced by repeated local rewriting.

use lmt_core::deflation::{Dir, ZigzagWord};
use lmt_core::fincat::FinCategory;

/// Drops identity letters and merges neighbours of one direction until
/// nothing changes.
pub fn reduce(x: &FinCategory, w: &ZigzagWord) -> Vec<(Dir, usize)> {
    let mut ls = w.letters.clone();
    loop {
        if let Some(i) = ls.iter().position(|&(_, f)| x.is_identity(f)) {
            ls.remove(i);
            continue;
        }
        let Some(i) = (1..ls.len()).find(|&i| ls[i - 1].0 == ls[i].0) else { break };
        let (d, f) = ls[i - 1];
        let g = ls[i].1;
        let merged = match d {
            Dir::Fwd => x.compose(f, g),
            Dir::Bwd => x.compose(g, f),
        }
        .expect("letters are composable");
        ls.splice(i - 1..=i, [(d, merged)]);
    }
    ls
}
