//! The 75 structural types: weak orderings of the quadruple symbols `{a, b, c, d}`.
//!
//! A type is stored as the dense rank of each symbol (0 = smallest block). Its
//! canonical string lists blocks from smallest to largest, joined by `<`, with
//! tied symbols in alphabetical order joined by `=`, e.g. `d<b=c<a`. Type ids
//! are 1-based ranks of the canonical strings in byte order.
//!
//! Categories follow the minimal block: it contains `d` (1), else `c` (2),
//! else `b` (3), else only `a` (4).

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::sce_model::Decomposition;

pub const TYPE_COUNT: usize = 75;

/// Canonical strings of the three types with no `d_E > 0` argument.
pub const EXCLUDED: [&str; 3] = ["d<b<c<a", "d<b=c<a", "d<c<b<a"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B,
    C,
    D,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::B, Symbol::C, Symbol::D];

    pub fn letter(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
            Symbol::C => 'c',
            Symbol::D => 'd',
        }
    }

    fn from_letter(ch: char) -> Option<Symbol> {
        match ch {
            'a' => Some(Symbol::A),
            'b' => Some(Symbol::B),
            'c' => Some(Symbol::C),
            'd' => Some(Symbol::D),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralType {
    ranks: [u8; 4],
    canonical: String,
    pub type_id: u8,
    pub category: u8,
    pub excluded: bool,
}

impl StructuralType {
    fn from_ranks(ranks: [u8; 4]) -> Self {
        let mut t = StructuralType {
            ranks,
            canonical: String::new(),
            type_id: 0,
            category: 0,
            excluded: false,
        };
        t.canonical = t
            .blocks()
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|s| s.letter().to_string())
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect::<Vec<_>>()
            .join("<");
        let first = t.blocks().remove(0);
        t.category = [Symbol::D, Symbol::C, Symbol::B, Symbol::A]
            .iter()
            .position(|s| first.contains(s))
            .map(|p| p as u8 + 1)
            .expect("minimal block is nonempty");
        t.excluded = EXCLUDED.contains(&t.canonical.as_str());
        t
    }

    /// Dense rank of each of `a, b, c, d`.
    pub fn ranks(&self) -> [u8; 4] {
        self.ranks
    }

    pub fn rank_of(&self, s: Symbol) -> u8 {
        self.ranks[s.index()]
    }

    /// Ordered blocks, smallest first; symbols within a block are tied.
    pub fn blocks(&self) -> Vec<Vec<Symbol>> {
        let n = self.ranks.iter().max().map_or(0, |&m| m as usize + 1);
        let mut blocks = vec![Vec::new(); n];
        for s in Symbol::ALL {
            blocks[self.ranks[s.index()] as usize].push(s);
        }
        blocks
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn is_excluded(&self) -> bool {
        self.excluded
    }

    fn key(&self) -> usize {
        rank_key(self.ranks)
    }
}

impl fmt::Display for StructuralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

impl Serialize for StructuralType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical)
    }
}

fn rank_key(ranks: [u8; 4]) -> usize {
    ranks
        .iter()
        .rev()
        .fold(0usize, |acc, &r| acc * 4 + r as usize)
}

struct Catalog {
    types: Vec<StructuralType>,
    /// Rank key -> index into `types`.
    by_key: [u8; 256],
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut types = Vec::with_capacity(TYPE_COUNT);
        for key in 0..256usize {
            let ranks = [0, 1, 2, 3].map(|i| ((key >> (2 * i)) & 3) as u8);
            if is_dense(ranks) {
                types.push(StructuralType::from_ranks(ranks));
            }
        }
        types.sort_by(|x, y| x.canonical.cmp(&y.canonical));
        let mut by_key = [u8::MAX; 256];
        for (i, t) in types.iter_mut().enumerate() {
            t.type_id = i as u8 + 1;
            by_key[t.key()] = i as u8;
        }
        Catalog { types, by_key }
    })
}

/// Ranks use every value in `0..=max` with no gaps.
fn is_dense(ranks: [u8; 4]) -> bool {
    let max = *ranks.iter().max().unwrap();
    (0..=max).all(|r| ranks.contains(&r))
}

/// All 75 types in id order.
pub fn enumerate_types() -> &'static [StructuralType] {
    &catalog().types
}

pub fn type_by_id(id: u8) -> Option<&'static StructuralType> {
    enumerate_types().get((id as usize).checked_sub(1)?)
}

/// Parses a canonical or non-canonical spelling such as `b=a<d<c`.
pub fn parse_type(s: &str) -> Option<&'static StructuralType> {
    let mut ranks = [u8::MAX; 4];
    for (rank, block) in s.split('<').enumerate() {
        for letter in block.split('=') {
            let mut chars = letter.chars();
            let sym = Symbol::from_letter(chars.next()?)?;
            if chars.next().is_some() || ranks[sym.index()] != u8::MAX {
                return None;
            }
            ranks[sym.index()] = rank as u8;
        }
    }
    if ranks.contains(&u8::MAX) {
        return None;
    }
    lookup(ranks)
}

fn lookup(ranks: [u8; 4]) -> Option<&'static StructuralType> {
    let c = catalog();
    let key = rank_key(ranks);
    match c.by_key[key] {
        u8::MAX => None,
        i => Some(&c.types[i as usize]),
    }
}

/// Type realized by four values on a common scale, `[a, b, c, d]`.
pub fn classify_values(values: [u64; 4]) -> &'static StructuralType {
    let ranks = values.map(|v| {
        let mut smaller = [false; 4];
        for (j, &w) in values.iter().enumerate() {
            if w < v {
                // Dedupe ties: only the first occurrence of each smaller value counts.
                smaller[j] = !values[..j].contains(&w);
            }
        }
        smaller.iter().filter(|&&x| x).count() as u8
    });
    lookup(ranks).expect("dense ranks always name a type")
}

/// Type of a decomposition, comparing `(a, b, c, d)` exactly.
pub fn classify(dec: &Decomposition) -> &'static StructuralType {
    classify_values(dec.doubled_quadruple())
}

pub fn is_excluded(t: &StructuralType) -> bool {
    t.excluded
}
