//! Alignment of one template against a token sequence.

use std::rc::Rc;

use super::table::Part;
use super::Token;

/// (slot index, start token, end token).
pub(super) type Span = (usize, usize, usize);

#[derive(Debug, Clone)]
pub(super) struct Alignment {
    pub matched: usize,
    pub extra: usize,
    /// In template order.
    pub spans: Vec<Span>,
}

impl Alignment {
    pub fn score(&self, literals: usize) -> f64 {
        let denom = literals + self.extra;
        if denom == 0 {
            1.0
        } else {
            self.matched as f64 / denom as f64
        }
    }
}

/// Pareto front of (more matched, fewer extra). Among equal pairs the first
/// one offered is kept, which makes exact matches slot-greedy.
fn offer(front: &mut Vec<Alignment>, a: Alignment) {
    if front.iter().any(|x| x.matched >= a.matched && x.extra <= a.extra) {
        return;
    }
    front.retain(|x| !(a.matched >= x.matched && a.extra <= x.extra));
    front.push(a);
}

struct Aligner<'a> {
    parts: &'a [Part],
    toks: &'a [Token],
    accepts: &'a dyn Fn(usize, usize, usize) -> bool,
    /// Indexed by `ti * (toks.len() + 1) + ui`.
    memo: Vec<Option<Rc<Vec<Alignment>>>>,
}

impl Aligner<'_> {
    fn best(&mut self, ti: usize, ui: usize) -> Rc<Vec<Alignment>> {
        let n = self.toks.len();
        let key = ti * (n + 1) + ui;
        if let Some(hit) = &self.memo[key] {
            return hit.clone();
        }
        let mut front = Vec::new();
        if ti == self.parts.len() {
            front.push(Alignment { matched: 0, extra: n - ui, spans: Vec::new() });
        } else {
            match &self.parts[ti] {
                Part::Lit(lit) => {
                    if ui < n && self.toks[ui].folded == *lit {
                        for a in self.best(ti + 1, ui + 1).iter() {
                            offer(&mut front, Alignment { matched: a.matched + 1, ..a.clone() });
                        }
                    }
                    for a in self.best(ti + 1, ui).iter() {
                        offer(&mut front, a.clone());
                    }
                }
                Part::Slot(slot) => {
                    for end in (ui + 1..=n).rev() {
                        if !(self.accepts)(*slot, ui, end) {
                            continue;
                        }
                        for a in self.best(ti + 1, end).iter() {
                            let mut spans = vec![(*slot, ui, end)];
                            spans.extend_from_slice(&a.spans);
                            offer(&mut front, Alignment { spans, ..a.clone() });
                        }
                    }
                }
            }
            if ui < n {
                for a in self.best(ti, ui + 1).iter() {
                    offer(&mut front, Alignment { extra: a.extra + 1, ..a.clone() });
                }
            }
        }
        let front = Rc::new(front);
        self.memo[key] = Some(front.clone());
        front
    }
}

/// An upper bound on any alignment score: literals that occur in the
/// utterance over all literals, as if nothing were extra.
pub(super) fn score_bound(parts: &[Part], toks: &[Token]) -> f64 {
    let mut avail: Vec<&str> = toks.iter().map(|t| t.folded.as_str()).collect();
    let (mut literals, mut hits) = (0usize, 0usize);
    for p in parts {
        if let Part::Lit(l) = p {
            literals += 1;
            if let Some(i) = avail.iter().position(|a| a == l) {
                avail.swap_remove(i);
                hits += 1;
            }
        }
    }
    if literals == 0 {
        1.0
    } else {
        hits as f64 / literals as f64
    }
}

/// Every non-dominated alignment binding all slots; empty if none exists.
pub(super) fn align(parts: &[Part], toks: &[Token], accepts: &dyn Fn(usize, usize, usize) -> bool) -> Vec<Alignment> {
    let memo = vec![None; (parts.len() + 1) * (toks.len() + 1)];
    let mut aligner = Aligner { parts, toks, accepts, memo };
    let front = aligner.best(0, 0);
    front.as_ref().clone()
}
