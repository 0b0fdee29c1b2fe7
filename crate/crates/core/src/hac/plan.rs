use std::fmt::Write as _;

use super::dendrogram::Dendrogram;
use crate::error::{Error, Result};

/// Pairwise union of two inputs into `output`. Ids below the leaf count
/// refer to source graphs; larger ids are outputs of earlier tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MergeTask {
    pub left: usize,
    pub right: usize,
    pub output: usize,
}

/// Tasks grouped into dependency levels. Every task in level `l` only reads
/// leaves or outputs of levels `< l`, so a level can run fully in parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergePlan {
    leaves: Vec<String>,
    levels: Vec<Vec<MergeTask>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStats {
    pub leaves: usize,
    pub tasks: usize,
    pub height: usize,
    pub tasks_per_level: Vec<usize>,
}

/// Level 0 holds merges of two leaves; otherwise a merge sits one level
/// above its deepest non-leaf child.
pub fn plan_from_dendrogram(dendrogram: &Dendrogram, leaves: Vec<String>) -> Result<MergePlan> {
    let n = dendrogram.leaves();
    if leaves.len() != n {
        return Err(Error::InvalidInput(format!("{} leaf names for a dendrogram over {n} items", leaves.len())));
    }
    let mut level = vec![0usize; dendrogram.merges().len()];
    let mut levels: Vec<Vec<MergeTask>> = Vec::new();
    for (k, m) in dendrogram.merges().iter().enumerate() {
        let child = |c: usize| if c < n { None } else { Some(level[c - n]) };
        let l = match (child(m.left), child(m.right)) {
            (None, None) => 0,
            (a, b) => 1 + a.unwrap_or(0).max(b.unwrap_or(0)),
        };
        level[k] = l;
        if levels.len() <= l {
            levels.resize_with(l + 1, Vec::new);
        }
        levels[l].push(MergeTask { left: m.left, right: m.right, output: m.id });
    }
    Ok(MergePlan { leaves, levels })
}

impl MergePlan {
    /// Builds and checks a plan from explicit levels.
    pub fn new(leaves: Vec<String>, mut levels: Vec<Vec<MergeTask>>) -> Result<Self> {
        let n = leaves.len();
        let bad = |msg: String| Err(Error::InvalidInput(format!("merge plan: {msg}")));
        if n == 0 {
            return bad("no leaves".into());
        }
        let total: usize = levels.iter().map(Vec::len).sum();
        if total != n - 1 {
            return bad(format!("{total} tasks for {n} leaves"));
        }
        let mut ready = vec![false; 2 * n - 1];
        ready[..n].iter_mut().for_each(|r| *r = true);
        let mut consumed = vec![false; 2 * n - 1];
        for (l, tasks) in levels.iter_mut().enumerate() {
            tasks.sort_by_key(|t| t.output);
            for t in tasks.iter() {
                if t.output < n || t.output >= 2 * n - 1 || ready[t.output] {
                    return bad(format!("level {l}: invalid output {}", t.output));
                }
                for c in [t.left, t.right] {
                    if c >= 2 * n - 1 || !ready[c] || consumed[c] {
                        return bad(format!("level {l}: input {c} of task {} is not available", t.output));
                    }
                    consumed[c] = true;
                }
            }
            for t in tasks.iter() {
                ready[t.output] = true;
            }
        }
        Ok(MergePlan { leaves, levels })
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn levels(&self) -> &[Vec<MergeTask>] {
        &self.levels
    }

    pub fn tasks(&self) -> impl Iterator<Item = &MergeTask> {
        self.levels.iter().flatten()
    }

    /// Id of the final result: the last task's output, or leaf 0 for a single graph.
    pub fn root(&self) -> usize {
        self.levels.last().and_then(|l| l.iter().map(|t| t.output).max()).unwrap_or(0)
    }

    /// Human-readable node name: the wiki id for a leaf, `u<id>` for a union.
    pub fn node_name(&self, id: usize) -> String {
        match self.leaves.get(id) {
            Some(name) => name.clone(),
            None => format!("u{id}"),
        }
    }

    pub fn stats(&self) -> PlanStats {
        PlanStats {
            leaves: self.leaves.len(),
            tasks: self.tasks().count(),
            height: self.levels.len(),
            tasks_per_level: self.levels.iter().map(Vec::len).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("leaves {}\n", self.leaves.len());
        for (i, name) in self.leaves.iter().enumerate() {
            let _ = writeln!(s, "{i} {name}");
        }
        for (l, tasks) in self.levels.iter().enumerate() {
            let _ = writeln!(s, "level {l}");
            for t in tasks {
                let _ = writeln!(s, "{} {} -> {}", t.left, t.right, t.output);
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let err = |no: usize, msg: &str| Error::InvalidInput(format!("plan line {}: {msg}", no + 1));
        let (no, head) = lines.next().ok_or_else(|| Error::InvalidInput("plan: empty file".into()))?;
        let n: usize = head
            .strip_prefix("leaves ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| err(no, "expected `leaves N`"))?;
        let mut leaves = Vec::with_capacity(n);
        for i in 0..n {
            let (no, line) = lines.next().ok_or_else(|| err(no, "missing leaf entries"))?;
            let (idx, name) = line.split_once(' ').ok_or_else(|| err(no, "expected `index name`"))?;
            if idx.parse::<usize>().ok() != Some(i) || name.is_empty() {
                return Err(err(no, "leaf entries must be numbered from 0"));
            }
            leaves.push(name.to_string());
        }
        let mut levels: Vec<Vec<MergeTask>> = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if let Some(l) = line.strip_prefix("level ") {
                if l.parse::<usize>().ok() != Some(levels.len()) {
                    return Err(err(no, "levels must be numbered consecutively from 0"));
                }
                levels.push(Vec::new());
                continue;
            }
            let current = levels.last_mut().ok_or_else(|| err(no, "task before first level"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(no, "expected `left right -> out`"));
            if f.len() != 4 || f[2] != "->" {
                return Err(err(no, "expected `left right -> out`"));
            }
            current.push(MergeTask { left: num(f[0])?, right: num(f[1])?, output: num(f[3])? });
        }
        Self::new(leaves, levels)
    }
}

#[cfg(test)]
mod tests {
    use super::super::dendrogram::Merge;
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("w{i}")).collect()
    }

    #[test]
    fn balanced_tree_has_two_levels() {
        let d = Dendrogram::from_merges(
            4,
            vec![
                Merge { left: 0, right: 1, distance: 0.1, id: 4 },
                Merge { left: 2, right: 3, distance: 0.2, id: 5 },
                Merge { left: 4, right: 5, distance: 0.3, id: 6 },
            ],
        )
        .unwrap();
        let p = plan_from_dendrogram(&d, names(4)).unwrap();
        assert_eq!(p.stats().tasks_per_level, vec![2, 1]);
        assert_eq!(p.root(), 6);
        let text = p.to_text();
        assert_eq!(text, "leaves 4\n0 w0\n1 w1\n2 w2\n3 w3\nlevel 0\n0 1 -> 4\n2 3 -> 5\nlevel 1\n4 5 -> 6\n");
        assert_eq!(MergePlan::parse(&text).unwrap(), p);
    }

    #[test]
    fn chain_is_sequential() {
        let d = Dendrogram::from_merges(
            4,
            vec![
                Merge { left: 0, right: 1, distance: 0.1, id: 4 },
                Merge { left: 2, right: 4, distance: 0.2, id: 5 },
                Merge { left: 3, right: 5, distance: 0.3, id: 6 },
            ],
        )
        .unwrap();
        let p = plan_from_dendrogram(&d, names(4)).unwrap();
        assert_eq!(p.stats().height, 3);
    }

    #[test]
    fn single_leaf_plan() {
        let p = MergePlan::new(names(1), vec![]).unwrap();
        assert_eq!(p.root(), 0);
        assert_eq!(MergePlan::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn rejects_same_level_dependency() {
        let levels = vec![vec![MergeTask { left: 0, right: 1, output: 3 }, MergeTask { left: 2, right: 3, output: 4 }]];
        assert!(MergePlan::new(names(3), levels).is_err());
        assert!(MergePlan::parse("leaves 2\n0 a\n1 b\nlevel 0\n0 1 > 2\n").is_err());
    }
}
