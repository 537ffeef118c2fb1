//! Depth, least common subsumer and Wu-Palmer similarity over the noun hierarchy.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Pos, Synset, SynsetId, WordNetDb, NOUN_ROOT_OFFSET};
use crate::error::{Error, Result};

/// How word-level similarity chooses among the senses of two words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SensePolicy {
    /// Compare the first (most frequent) noun sense of each word.
    #[default]
    FirstSense,
    /// Maximum over all pairs of noun senses.
    MaxOverSenses,
}

/// Shortest-path depth of every noun synset, root = 1. Fails on cycles and on
/// parentless synsets other than `entity`.
pub(super) fn shortest_depths(synsets: &[Synset], parents: &[Vec<u32>]) -> Result<Vec<u32>> {
    const UNSEEN: u32 = 0;
    const ACTIVE: u32 = u32::MAX;
    let mut depth = vec![UNSEEN; synsets.len()];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..synsets.len() {
        if depth[start] != UNSEEN {
            continue;
        }
        depth[start] = ACTIVE;
        stack.push((start, 0));
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&parent) = parents[node].get(*next) {
                *next += 1;
                let parent = parent as usize;
                match depth[parent] {
                    ACTIVE => {
                        return Err(Error::Format(format!(
                            "hypernym cycle through noun synset {}",
                            synsets[parent].id
                        )))
                    }
                    UNSEEN => {
                        depth[parent] = ACTIVE;
                        stack.push((parent, 0));
                    }
                    _ => {}
                }
                continue;
            }
            stack.pop();
            depth[node] = if parents[node].is_empty() {
                if synsets[node].id.offset != NOUN_ROOT_OFFSET {
                    return Err(Error::Format(format!(
                        "noun synset {} has no hypernym but is not the root",
                        synsets[node].id
                    )));
                }
                1
            } else {
                1 + parents[node]
                    .iter()
                    .map(|&p| depth[p as usize])
                    .min()
                    .expect("non-empty")
            };
        }
    }
    Ok(depth)
}

impl WordNetDb {
    /// 1 + length of the shortest hypernym path to `entity`.
    pub fn depth(&self, synset: &Synset) -> Result<u32> {
        let slot = self.noun_slot(synset)?;
        Ok(self.noun_depth[slot])
    }

    /// Ancestor-or-self slots with their shortest upward distance.
    fn ancestor_distances(&self, slot: usize) -> HashMap<usize, u32> {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(slot, 0);
        queue.push_back(slot);
        while let Some(node) = queue.pop_front() {
            let d = dist[&node];
            for &parent in &self.noun_parents[node] {
                let parent = parent as usize;
                dist.entry(parent).or_insert_with(|| {
                    queue.push_back(parent);
                    d + 1
                });
            }
        }
        dist
    }

    fn noun_at(&self, slot: usize) -> &Synset {
        &self.table(Pos::Noun).synsets[slot]
    }

    /// Returns (lcs slot, distance from a, distance from b).
    ///
    /// A synset with several parents can have an ancestor that is deeper than
    /// itself under shortest-path depth, so identical inputs are answered
    /// directly rather than by the depth ranking.
    fn lcs_slots(&self, a: usize, b: usize) -> (usize, u32, u32) {
        if a == b {
            return (a, 0, 0);
        }
        let from_a = self.ancestor_distances(a);
        let from_b = self.ancestor_distances(b);
        let mut best: Option<(usize, u32, u32)> = None;
        for (&node, &da) in &from_a {
            let Some(&db) = from_b.get(&node) else {
                continue;
            };
            let better = match best {
                None => true,
                Some((cur, _, _)) => {
                    let (d_new, d_cur) = (self.noun_depth[node], self.noun_depth[cur]);
                    d_new > d_cur
                        || (d_new == d_cur
                            && self.noun_at(node).id.offset < self.noun_at(cur).id.offset)
                }
            };
            if better {
                best = Some((node, da, db));
            }
        }
        best.expect("entity is a common ancestor of every noun pair")
    }

    /// Deepest common hypernym (ancestor-or-self); ties go to the smaller offset.
    /// A synset is its own lcs.
    pub fn lcs(&self, a: &Synset, b: &Synset) -> Result<&Synset> {
        let (l, _, _) = self.lcs_slots(self.noun_slot(a)?, self.noun_slot(b)?);
        Ok(self.noun_at(l))
    }

    /// Wu-Palmer similarity `2·d(l) / ((d(l)+dist(a,l)) + (d(l)+dist(b,l)))`,
    /// where `l` is the lcs and `d(l)` its depth. Each synset's depth is taken
    /// along its path through the lcs, which keeps the score in (0, 1].
    pub fn wup(&self, a: &Synset, b: &Synset) -> Result<f64> {
        let (sa, sb) = (self.noun_slot(a)?, self.noun_slot(b)?);
        let (l, da, db) = self.lcs_slots(sa, sb);
        let d = f64::from(self.noun_depth[l]);
        Ok(2.0 * d / (2.0 * d + f64::from(da) + f64::from(db)))
    }

    /// Word-level WUP over noun senses; 0 when either word has no noun synset.
    pub fn wup_words(&self, w1: &str, w2: &str, policy: SensePolicy) -> f64 {
        let s1 = self.synsets(w1, Pos::Noun);
        let s2 = self.synsets(w2, Pos::Noun);
        if s1.is_empty() || s2.is_empty() {
            return 0.0;
        }
        let score = |a: &Synset, b: &Synset| self.wup(a, b).expect("noun synsets");
        match policy {
            SensePolicy::FirstSense => score(s1[0], s2[0]),
            SensePolicy::MaxOverSenses => s1
                .iter()
                .flat_map(|a| s2.iter().map(move |b| (a, b)))
                .map(|(a, b)| score(a, b))
                .fold(0.0, f64::max),
        }
    }

    /// Noun synset ids on the shortest path from `synset` up to the root, inclusive.
    pub fn shortest_hypernym_path(&self, synset: &Synset) -> Result<Vec<SynsetId>> {
        let mut slot = self.noun_slot(synset)?;
        let mut path = vec![self.noun_at(slot).id];
        while let Some(&next) = self.noun_parents[slot].iter().min_by_key(|&&p| {
            (
                self.noun_depth[p as usize],
                self.noun_at(p as usize).id.offset,
            )
        }) {
            slot = next as usize;
            path.push(self.noun_at(slot).id);
        }
        Ok(path)
    }
}
