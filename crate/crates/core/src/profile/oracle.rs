//! Explicit enumeration of profile alignments for tiny inputs.

use super::model::{ProfileHmm, StateKind, TO_DELETE, TO_INSERT, TO_MATCH};

/// A visited state; the begin state is `(Match, 0)` and is not listed.
pub type ProfileState = (StateKind, usize);

/// Every begin-to-end state path that emits exactly `x`, with its
/// probability. Zero-probability paths are skipped.
pub fn enumerate_paths(p: &ProfileHmm, x: &[usize]) -> Vec<(Vec<ProfileState>, f64)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(p, x, (StateKind::Match, 0), 0, 1.0, &mut path, &mut out);
    out
}

fn walk(
    p: &ProfileHmm,
    x: &[usize],
    (kind, col): ProfileState,
    consumed: usize,
    prob: f64,
    path: &mut Vec<ProfileState>,
    out: &mut Vec<(Vec<ProfileState>, f64)>,
) {
    let l = p.length();
    let bundle = *p.transitions()[col].bundle(kind);
    // next match, or end when in the last column
    if bundle[TO_MATCH] > 0.0 {
        if col == l {
            if consumed == x.len() {
                out.push((path.clone(), prob * bundle[TO_MATCH]));
            }
        } else if consumed < x.len() {
            let e = p.match_emission(col + 1, x[consumed]);
            if e > 0.0 {
                path.push((StateKind::Match, col + 1));
                walk(p, x, (StateKind::Match, col + 1), consumed + 1, prob * bundle[TO_MATCH] * e, path, out);
                path.pop();
            }
        }
    }
    if bundle[TO_INSERT] > 0.0 && consumed < x.len() {
        let e = p.insert_emission(col, x[consumed]);
        if e > 0.0 {
            path.push((StateKind::Insert, col));
            walk(p, x, (StateKind::Insert, col), consumed + 1, prob * bundle[TO_INSERT] * e, path, out);
            path.pop();
        }
    }
    if col < l && bundle[TO_DELETE] > 0.0 {
        path.push((StateKind::Delete, col + 1));
        walk(p, x, (StateKind::Delete, col + 1), consumed, prob * bundle[TO_DELETE], path, out);
        path.pop();
    }
}

/// `P(x)` as the sum over enumerated paths.
pub fn enumerate_prob(p: &ProfileHmm, x: &[usize]) -> f64 {
    enumerate_paths(p, x).iter().map(|(_, pr)| pr).sum()
}
