//! Brute-force Wu-Palmer reference: parses data.noun on its own and
//! enumerates every hypernym path.

use std::collections::HashMap;
use std::path::Path;

/// Noun hypernym graph read straight from data.noun, without the library parser.
pub struct RawNouns {
    pub parents: HashMap<u32, Vec<u32>>,
}

impl RawNouns {
    pub fn read(dir: &Path) -> Self {
        let text = std::fs::read_to_string(dir.join("data.noun")).unwrap();
        let mut parents = HashMap::new();
        for line in text.lines().filter(|l| !l.starts_with("  ")) {
            let fields: Vec<&str> = line.split(" | ").next().unwrap().split(' ').collect();
            let offset: u32 = fields[0].parse().unwrap();
            let words = usize::from_str_radix(fields[3], 16).unwrap();
            let mut i = 4 + 2 * words;
            let pointers: usize = fields[i].parse().unwrap();
            i += 1;
            let mut ps = Vec::new();
            for _ in 0..pointers {
                if (fields[i] == "@" || fields[i] == "@i") && fields[i + 2] == "n" {
                    ps.push(fields[i + 1].parse().unwrap());
                }
                i += 4;
            }
            parents.insert(offset, ps);
        }
        RawNouns { parents }
    }

    /// Every path from `s` up to a root, `s` first.
    pub fn paths(&self, s: u32) -> Vec<Vec<u32>> {
        let ps = &self.parents[&s];
        if ps.is_empty() {
            return vec![vec![s]];
        }
        let mut out = Vec::new();
        for &p in ps {
            for mut path in self.paths(p) {
                path.insert(0, s);
                out.push(path);
            }
        }
        out
    }

    /// Minimum number of edges from `s` to every ancestor (including itself).
    pub fn ancestors(&self, s: u32) -> HashMap<u32, usize> {
        let mut best: HashMap<u32, usize> = HashMap::new();
        for path in self.paths(s) {
            for (d, &a) in path.iter().enumerate() {
                let e = best.entry(a).or_insert(d);
                *e = (*e).min(d);
            }
        }
        best
    }

    /// Depth with root = 1, as the shortest of all root paths.
    pub fn depth(&self, s: u32) -> usize {
        self.paths(s).iter().map(Vec::len).min().unwrap()
    }

    pub fn wup(&self, a: u32, b: u32) -> f64 {
        if a == b {
            return 1.0;
        }
        let aa = self.ancestors(a);
        let ab = self.ancestors(b);
        let mut common: Vec<u32> = aa.keys().filter(|k| ab.contains_key(k)).copied().collect();
        common.sort();
        let lcs = *common
            .iter()
            .max_by(|x, y| self.depth(**x).cmp(&self.depth(**y)).then(y.cmp(x)))
            .unwrap();
        let d = self.depth(lcs) as f64;
        2.0 * d / ((d + aa[&lcs] as f64) + (d + ab[&lcs] as f64))
    }
}
