use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::subtrees::VectorStrongSubtree;
use crate::trees::{LtMatrix, TreeNode};

/// Something a coloring rule can be applied to.
pub trait Colorable {
    /// Canonical serialization; keys explicit colorings and hashing.
    fn key(&self) -> String;

    /// Sum used by the parity rule.
    fn parity_weight(&self) -> u64;

    /// Whether any node carries a one entry, where meaningful.
    fn edge_presence(&self) -> Option<bool> {
        None
    }

    /// Rank of the relative order of the items, where meaningful.
    fn order_rank(&self) -> Option<u64> {
        None
    }
}

/// A copy in the matrix hypergraph: image of each pattern vertex.
impl Colorable for [LtMatrix] {
    fn key(&self) -> String {
        self.iter().map(TreeNode::to_token).collect::<Vec<_>>().join(" ")
    }

    fn parity_weight(&self) -> u64 {
        self.iter().map(|m| m.order() as u64).sum()
    }

    fn edge_presence(&self) -> Option<bool> {
        Some(self.iter().any(|m| m.count_ones() > 0))
    }
}

/// A copy in a plain hypergraph: image vertex of each pattern vertex.
impl Colorable for [usize] {
    fn key(&self) -> String {
        self.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }

    fn parity_weight(&self) -> u64 {
        self.iter().map(|&x| x as u64).sum()
    }

    fn order_rank(&self) -> Option<u64> {
        // Lehmer code of the relative order.
        let n = self.len();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self[i + 1..].iter().filter(|&&x| x < self[i]).count() as u64;
            rank = rank * (n - i) as u64 + smaller;
        }
        Some(rank)
    }
}

impl Colorable for VectorStrongSubtree {
    fn key(&self) -> String {
        self.to_text()
    }

    fn parity_weight(&self) -> u64 {
        self.levels().iter().map(|&l| l as u64).sum()
    }
}

/// How a color is chosen.
#[derive(Clone)]
pub enum ColorRule {
    Constant,
    /// Parity weight modulo `k`.
    Parity,
    /// 1 when some node has a one entry, else 0.
    EdgePresence,
    /// Rank of the relative order modulo `k`.
    OrderType,
    /// SHA-256 of the seed and the key, modulo `k`.
    Hash { seed: u64 },
    /// Colors listed by key.
    Explicit(BTreeMap<String, usize>),
    /// Any function of the key.
    Custom(Arc<dyn Fn(&str) -> usize + Send + Sync>),
}

impl fmt::Debug for ColorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorRule::Constant => f.write_str("Constant"),
            ColorRule::Parity => f.write_str("Parity"),
            ColorRule::EdgePresence => f.write_str("EdgePresence"),
            ColorRule::OrderType => f.write_str("OrderType"),
            ColorRule::Hash { seed } => write!(f, "Hash {{ seed: {seed} }}"),
            ColorRule::Explicit(m) => write!(f, "Explicit({} entries)", m.len()),
            ColorRule::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// A coloring into `{0, .., k-1}`.
#[derive(Clone, Debug)]
pub struct Coloring {
    rule: ColorRule,
    k: usize,
}

impl Coloring {
    pub fn new(rule: ColorRule, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::usage("a coloring needs at least one color"));
        }
        if let ColorRule::Explicit(m) = &rule {
            if let Some((key, c)) = m.iter().find(|(_, &c)| c >= k) {
                return Err(Error::usage(format!("color {c} of `{key}` is not below {k}")));
            }
        }
        Ok(Coloring { rule, k })
    }

    pub fn constant() -> Self {
        Coloring {
            rule: ColorRule::Constant,
            k: 1,
        }
    }

    pub fn custom(k: usize, f: impl Fn(&str) -> usize + Send + Sync + 'static) -> Result<Self> {
        Coloring::new(ColorRule::Custom(Arc::new(f)), k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rule(&self) -> &ColorRule {
        &self.rule
    }

    /// Parse `constant`, `parity[:K]`, `edge[:K]`, `order[:K]` or
    /// `hash[:K[:SEED]]`; `default_seed` applies when no seed is given.
    pub fn parse(spec: &str, default_seed: u64) -> Result<Self> {
        let mut parts = spec.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let mut num = |what: &str| -> Result<Option<u64>> {
            parts
                .next()
                .map(|p| {
                    p.parse::<u64>()
                        .map_err(|_| Error::usage(format!("bad {what} `{p}` in coloring `{spec}`")))
                })
                .transpose()
        };
        let k = num("color count")?.map(|k| k as usize);
        let (rule, k) = match name {
            "constant" => (ColorRule::Constant, k.unwrap_or(1)),
            "parity" => (ColorRule::Parity, k.unwrap_or(2)),
            "edge" => (ColorRule::EdgePresence, k.unwrap_or(2)),
            "order" => (ColorRule::OrderType, k.unwrap_or(2)),
            "hash" => {
                let seed = num("seed")?.unwrap_or(default_seed);
                (ColorRule::Hash { seed }, k.unwrap_or(2))
            }
            other => return Err(Error::usage(format!("unknown coloring `{other}`"))),
        };
        Coloring::new(rule, k)
    }

    /// Explicit coloring text: one `<color> <key>` line per item.
    pub fn parse_explicit(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, key) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(i + 1, "expected `<color> <key>`"))?;
            let c: usize = c
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad color `{c}`")))?;
            map.insert(key.trim().to_string(), c);
        }
        let k = map.values().max().map_or(1, |m| m + 1);
        Coloring::new(ColorRule::Explicit(map), k)
    }

    pub fn color<T: Colorable + ?Sized>(&self, x: &T) -> Result<usize> {
        let k = self.k as u64;
        let c = match &self.rule {
            ColorRule::Constant => 0,
            ColorRule::Parity => x.parity_weight() % k,
            ColorRule::EdgePresence => {
                let p = x
                    .edge_presence()
                    .ok_or_else(|| Error::usage("edge-presence coloring does not apply here"))?;
                u64::from(p) % k
            }
            ColorRule::OrderType => {
                x.order_rank()
                    .ok_or_else(|| Error::usage("order-type coloring does not apply here"))?
                    % k
            }
            ColorRule::Hash { seed } => {
                let mut hasher = Sha256::new();
                hasher.update(seed.to_le_bytes());
                hasher.update(x.key().as_bytes());
                let digest = hasher.finalize();
                let mut first = [0u8; 8];
                first.copy_from_slice(&digest[..8]);
                u64::from_le_bytes(first) % k
            }
            ColorRule::Explicit(map) => {
                let key = x.key();
                *map.get(&key)
                    .ok_or_else(|| Error::usage(format!("`{key}` is outside the coloring's domain")))?
                    as u64
            }
            ColorRule::Custom(f) => f(&x.key()) as u64 % k,
        };
        Ok(c as usize)
    }
}

/// Colors of copies in their canonical enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ColorVector {
    pub entries: Vec<usize>,
}

impl ColorVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distinct_colors(&self) -> usize {
        let mut e = self.entries.clone();
        e.sort_unstable();
        e.dedup();
        e.len()
    }
}
