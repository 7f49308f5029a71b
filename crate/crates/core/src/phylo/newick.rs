//! Rooted trees and the Newick text format.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One node of a [`RootedTree`]. `length` is the length of the edge to the
/// parent (the root's is usually 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub length: f64,
    pub label: Option<String>,
}

/// A rooted tree with branch lengths, stored as an arena of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    nodes: Vec<Node>,
    root: usize,
}

impl RootedTree {
    /// Builds a tree from an arena. Checks that parent and child links agree,
    /// that there is exactly one root and that lengths are finite and
    /// nonnegative.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self> {
        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].parent.is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "tree must have exactly one root, found {}",
                roots.len()
            )));
        }
        for (i, n) in nodes.iter().enumerate() {
            if !n.length.is_finite() || n.length < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "branch length {} on node {i} is not a nonnegative number",
                    n.length
                )));
            }
            for &c in &n.children {
                if c >= nodes.len() || nodes[c].parent != Some(i) {
                    return Err(Error::InvalidParameter(format!("broken link {i} -> {c}")));
                }
            }
        }
        let tree = RootedTree { nodes, root: roots[0] };
        // every node must be reachable from the root (rules out cycles)
        if tree.preorder().len() != tree.nodes.len() {
            return Err(Error::InvalidParameter("tree is not connected".into()));
        }
        Ok(tree)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Leaf node ids in preorder.
    pub fn leaves(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&i| self.is_leaf(i)).collect()
    }

    /// Leaf labels in preorder. Unlabeled leaves yield an empty string.
    pub fn leaf_labels(&self) -> Vec<String> {
        self.leaves()
            .into_iter()
            .map(|i| self.nodes[i].label.clone().unwrap_or_default())
            .collect()
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    /// Distance from the root to every node (the root edge is not counted).
    pub fn depths(&self) -> Vec<f64> {
        let mut depth = vec![0.0; self.nodes.len()];
        for n in self.preorder() {
            if let Some(p) = self.nodes[n].parent {
                depth[n] = depth[p] + self.nodes[n].length;
            }
        }
        depth
    }

    /// True iff every root-to-leaf path has the same length within `tol`.
    pub fn is_equidistant(&self, tol: f64) -> bool {
        let depth = self.depths();
        let leaves = self.leaves();
        let (lo, hi) = leaves.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
            (lo.min(depth[l]), hi.max(depth[l]))
        });
        hi - lo <= tol
    }

    /// Serializes to Newick. Lengths are written in shortest round-trip form.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root, &mut out);
        let root_len = self.nodes[self.root].length;
        if root_len != 0.0 {
            let _ = write!(out, ":{root_len}");
        }
        out.push(';');
        out
    }

    fn write_node(&self, id: usize, out: &mut String) {
        let node = &self.nodes[id];
        if !node.children.is_empty() {
            out.push('(');
            for (k, &c) in node.children.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                self.write_node(c, out);
                let _ = write!(out, ":{}", self.nodes[c].length);
            }
            out.push(')');
        }
        if let Some(label) = &node.label {
            if !label.is_empty() && label.bytes().all(is_label_byte) {
                out.push_str(label);
            } else {
                let _ = write!(out, "'{}'", label.replace('\'', "''"));
            }
        }
    }
}

/// Parses one Newick tree. Errors carry the byte offset of the offending
/// character.
pub fn parse_newick(text: &str) -> Result<RootedTree> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nodes: Vec::new() };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty input"));
    }
    let root = p.subtree(None)?;
    p.skip_ws();
    match p.peek() {
        Some(b';') => p.pos += 1,
        Some(_) => return Err(p.error("expected ';'")),
        None => return Err(p.error("missing terminating ';'")),
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected text after ';'"));
    }
    debug_assert_eq!(root, 0);

    let mut seen = HashSet::new();
    for n in &p.nodes {
        if n.children.is_empty() {
            let label = n.label.as_deref().unwrap_or("");
            if !seen.insert(label.to_string()) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
        }
    }
    RootedTree::from_nodes(p.nodes)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

fn is_label_byte(b: u8) -> bool {
    !matches!(b, b'(' | b')' | b',' | b':' | b';' | b'[' | b']' | b'\'') && !b.is_ascii_whitespace()
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn subtree(&mut self, parent: Option<usize>) -> Result<usize> {
        let id = self.nodes.len();
        self.nodes.push(Node { parent, children: Vec::new(), length: 0.0, label: None });
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.subtree(Some(id))?;
                self.nodes[id].children.push(child);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => return Err(self.error("expected ',' or ')'")),
                    None => return Err(self.error("unbalanced parentheses")),
                }
            }
        }
        self.skip_ws();
        let label = self.label()?;
        if self.nodes[id].children.is_empty() && label.is_none() {
            return Err(self.error("leaf without a label"));
        }
        self.nodes[id].label = label;
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            self.nodes[id].length = self.number()?;
        }
        Ok(id)
    }

    fn label(&mut self) -> Result<Option<String>> {
        if self.peek() == Some(b'\'') {
            let start = self.pos;
            self.pos += 1;
            let mut out = Vec::new();
            loop {
                match self.peek() {
                    Some(b'\'') if self.src.get(self.pos + 1) == Some(&b'\'') => {
                        out.push(b'\'');
                        self.pos += 2;
                    }
                    Some(b'\'') => {
                        self.pos += 1;
                        break;
                    }
                    Some(b) => {
                        out.push(b);
                        self.pos += 1;
                    }
                    None => {
                        self.pos = start;
                        return Err(self.error("unterminated quoted label"));
                    }
                }
            }
            return Ok(Some(String::from_utf8_lossy(&out).into_owned()));
        }
        let start = self.pos;
        while matches!(self.peek(), Some(b) if is_label_byte(b)) {
            self.pos += 1;
        }
        if self.pos == start {
            return Ok(None);
        }
        // label bytes exclude every ASCII delimiter, so the slice is valid UTF-8
        Ok(Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
            _ => {
                self.pos = start;
                Err(self.error("expected a nonnegative branch length"))
            }
        }
    }
}
