//! Forest words: the canonical serialization of castle combinatorics.
//!
//! A word like `(l2)(r3(r1 l3))(r2 l1)` lists one fully parenthesized
//! binary tree per polygon. A space separates two adjacent leaves; all
//! other boundaries are carried by the parentheses. Printing is the
//! byte-exact inverse of parsing on canonical input.

use std::fmt;

use super::CastleError;
use crate::hyp::{Perm, Side};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    /// Leaf `l_j` or `r_j` (0-based index).
    Leaf(Side, usize),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<(Side, usize)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(Side, usize)>) {
        match self {
            Tree::Leaf(s, j) => out.push((*s, *j)),
            Tree::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(..) => 1,
            Tree::Node(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Replaces the unique leaf `(side, j)` using `f`; returns whether a
    /// replacement happened.
    pub fn replace_leaf(&mut self, side: Side, j: usize, replacement: Tree) -> bool {
        match self {
            Tree::Leaf(s, idx) if *s == side && *idx == j => {
                *self = replacement;
                true
            }
            Tree::Leaf(..) => false,
            Tree::Node(a, b) => {
                a.replace_leaf(side, j, replacement.clone()) || b.replace_leaf(side, j, replacement)
            }
        }
    }

    /// Finds the parent node of leaf `(side, j)` and splits it: the leaf
    /// stays, the sibling subtree is returned. `None` when the leaf is a
    /// whole tree or absent.
    pub fn detach_sibling(&mut self, side: Side, j: usize) -> Option<Tree> {
        if let Tree::Node(a, b) = self {
            let is_target = |t: &Tree| matches!(t, Tree::Leaf(s, idx) if *s == side && *idx == j);
            if is_target(a) {
                let sibling = (**b).clone();
                *self = Tree::Leaf(side, j);
                return Some(sibling);
            }
            if is_target(b) {
                let sibling = (**a).clone();
                *self = Tree::Leaf(side, j);
                return Some(sibling);
            }
            if let Some(s) = a.detach_sibling(side, j) {
                return Some(s);
            }
            return b.detach_sibling(side, j);
        }
        None
    }

    /// Which child holds leaf `(side, j)` at its parent: left or right.
    pub fn leaf_parent_arm(&self, side: Side, j: usize) -> Option<Side> {
        if let Tree::Node(a, b) = self {
            let is_target = |t: &Tree| matches!(t, Tree::Leaf(s, idx) if *s == side && *idx == j);
            if is_target(a) {
                return Some(Side::Left);
            }
            if is_target(b) {
                return Some(Side::Right);
            }
            if let Some(s) = a.leaf_parent_arm(side, j) {
                return Some(s);
            }
            return b.leaf_parent_arm(side, j);
        }
        None
    }

    pub fn contains_leaf(&self, side: Side, j: usize) -> bool {
        self.leaves().contains(&(side, j))
    }

    pub fn relabel(&self, sigma: &Perm) -> Tree {
        match self {
            Tree::Leaf(s, j) => Tree::Leaf(*s, sigma.apply(*j)),
            Tree::Node(a, b) => Tree::Node(Box::new(a.relabel(sigma)), Box::new(b.relabel(sigma))),
        }
    }

    fn print(&self, out: &mut String) {
        match self {
            Tree::Leaf(Side::Left, j) => out.push_str(&format!("l{}", j + 1)),
            Tree::Leaf(Side::Right, j) => out.push_str(&format!("r{}", j + 1)),
            Tree::Node(a, b) => {
                a.print_child(out);
                if matches!(**a, Tree::Leaf(..)) && matches!(**b, Tree::Leaf(..)) {
                    out.push(' ');
                }
                b.print_child(out);
            }
        }
    }

    fn print_child(&self, out: &mut String) {
        match self {
            Tree::Leaf(..) => self.print(out),
            Tree::Node(..) => {
                out.push('(');
                self.print(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.print(&mut s);
        write!(f, "{s}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ForestWord {
    pub trees: Vec<Tree>,
}

impl ForestWord {
    pub fn parse(input: &str) -> Result<Self, CastleError> {
        let mut p = Parser {
            src: input.as_bytes(),
            pos: 0,
        };
        let mut trees = Vec::new();
        p.skip_ws();
        while p.pos < p.src.len() {
            trees.push(p.group()?);
            p.skip_ws();
        }
        if trees.is_empty() {
            return Err(CastleError::Parse("empty word".into()));
        }
        Ok(ForestWord { trees })
    }

    /// Every label `l_j`, `r_j` for `j < k` appears exactly once.
    pub fn check_labels(&self, k: usize) -> Result<(), CastleError> {
        if self.trees.len() != k {
            return Err(CastleError::Labels(format!(
                "{} trees for k = {k}",
                self.trees.len()
            )));
        }
        let mut seen = vec![[false; 2]; k];
        for tree in &self.trees {
            for (side, j) in tree.leaves() {
                if j >= k {
                    return Err(CastleError::Labels(format!("index {} out of range", j + 1)));
                }
                let slot = usize::from(side == Side::Right);
                if seen[j][slot] {
                    return Err(CastleError::Labels(format!(
                        "{}{}",
                        if side == Side::Left { 'l' } else { 'r' },
                        j + 1
                    )));
                }
                seen[j][slot] = true;
            }
        }
        for (j, s) in seen.iter().enumerate() {
            if !s[0] || !s[1] {
                return Err(CastleError::Labels(format!("missing label {}", j + 1)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ForestWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for tree in &self.trees {
            let mut s = String::new();
            tree.print(&mut s);
            write!(f, "({s})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ForestWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn fail(&self, msg: &str) -> CastleError {
        CastleError::Parse(format!("{msg} at byte {}", self.pos))
    }

    /// A parenthesized group of one item (a leaf tree) or two items.
    fn group(&mut self) -> Result<Tree, CastleError> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'(') {
            return Err(self.fail("expected '('"));
        }
        self.pos += 1;
        let first = self.item()?;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b')') {
            self.pos += 1;
            return Ok(first);
        }
        let second = self.item()?;
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b')') {
            return Err(self.fail("expected ')' after two items"));
        }
        self.pos += 1;
        Ok(Tree::Node(Box::new(first), Box::new(second)))
    }

    fn item(&mut self) -> Result<Tree, CastleError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'(') => self.group(),
            Some(&c) if c == b'l' || c == b'r' => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.fail("expected index"));
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.fail("bad index"))?;
                if idx == 0 {
                    return Err(self.fail("indices are 1-based"));
                }
                let side = if c == b'l' { Side::Left } else { Side::Right };
                Ok(Tree::Leaf(side, idx - 1))
            }
            _ => Err(self.fail("expected leaf or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        for word in [
            "(l2)(r3(r1 l3))(r2 l1)",
            "(r2 l2)(r3 l3)(r1 l1)",
            "(l2)((r3 l1)(r1 l3))(r2)",
            "(l2)(r3 l1)(r2(r1 l3))",
            "(r1 l1)",
        ] {
            let parsed = ForestWord::parse(word).unwrap();
            assert_eq!(parsed.to_string(), word);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(ForestWord::parse("").is_err());
        assert!(ForestWord::parse("(l0)").is_err());
        assert!(ForestWord::parse("(l1 r1 l2)").is_err());
        assert!(ForestWord::parse("(l1").is_err());
    }

    #[test]
    fn label_check() {
        let w = ForestWord::parse("(l2)(r3(r1 l3))(r2 l1)").unwrap();
        w.check_labels(3).unwrap();
        assert!(w.check_labels(4).is_err());
        let dup = ForestWord::parse("(l1 l1)(r1 r2)(l2 r3)").unwrap();
        assert!(dup.check_labels(3).is_err());
    }

    #[test]
    fn surgery_helpers() {
        let mut t = ForestWord::parse("(r3(r1 l3))").unwrap().trees.remove(0);
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.leaf_parent_arm(Side::Left, 2), Some(Side::Right));
        let sibling = t.detach_sibling(Side::Left, 2).unwrap();
        assert_eq!(format!("{sibling:?}"), "r1");
        assert_eq!(format!("{t:?}"), "r3 l3");
    }
}
