//! Named families of lattices, addressed by short descriptor strings such as
//! `boolean:3`, `divisor:12` or `product:boolean:2,chain:1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poset::Poset;

/// Largest partition lattice built without [`GenerateOptions::allow_large`].
pub const PARTITION_DEFAULT_MAX: usize = 4;
/// Largest partition lattice built at all.
pub const PARTITION_HARD_MAX: usize = 6;
const BOOLEAN_MAX: usize = 8;
const DIVISOR_MAX: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    /// Total order `0 < 1 < … < n`.
    Chain(usize),
    /// Subsets of an `n`-set.
    Boolean(usize),
    /// Divisors of `m` under divisibility.
    Divisor(u64),
    /// Set partitions of `{1..n}` under refinement.
    Partition(usize),
    /// `M_k`: `k` pairwise incomparable atoms between `0̂` and `1̂`.
    Diamond(usize),
    /// `N_5`.
    Pentagon,
    Product(Box<Descriptor>, Box<Descriptor>),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GenerateOptions {
    /// Permit partition lattices above [`PARTITION_DEFAULT_MAX`].
    pub allow_large: bool,
}

impl Descriptor {
    pub fn generate(&self) -> Result<Lattice> {
        self.generate_with(GenerateOptions::default())
    }

    pub fn generate_with(&self, options: GenerateOptions) -> Result<Lattice> {
        let poset = self.poset(options)?;
        Lattice::from_poset(poset)
    }

    fn poset(&self, options: GenerateOptions) -> Result<Poset> {
        match *self {
            Descriptor::Chain(n) => {
                Poset::from_relation((0..=n).map(|i| i.to_string()).collect(), |a, b| a <= b)
            }
            Descriptor::Boolean(n) => {
                if n > BOOLEAN_MAX {
                    return Err(self.unsupported());
                }
                let full = (1usize << n) - 1;
                let names = (0..=full)
                    .map(|mask| match mask {
                        0 => "0".to_owned(),
                        m if m == full => "1".to_owned(),
                        m => (0..n)
                            .filter(|i| m >> i & 1 == 1)
                            .map(|i| char::from(b'a' + i as u8))
                            .collect(),
                    })
                    .collect();
                Poset::from_relation(names, |a, b| a & b == a)
            }
            Descriptor::Divisor(m) => {
                if m == 0 || m > DIVISOR_MAX {
                    return Err(self.unsupported());
                }
                let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
                let names = divisors.iter().map(u64::to_string).collect();
                Poset::from_relation(names, |a, b| divisors[b].is_multiple_of(divisors[a]))
            }
            Descriptor::Partition(n) => {
                let cap = if options.allow_large {
                    PARTITION_HARD_MAX
                } else {
                    PARTITION_DEFAULT_MAX
                };
                if n > cap {
                    return Err(self.unsupported());
                }
                let parts = set_partitions(n);
                let names = parts.iter().map(|p| partition_label(p)).collect();
                Poset::from_relation(names, |a, b| refines(&parts[a], &parts[b]))
            }
            Descriptor::Diamond(k) => {
                let mut names = vec!["0".to_owned()];
                names.extend(atom_names(k));
                names.push("1".to_owned());
                let top = k + 1;
                Poset::from_relation(names, |a, b| a == b || a == 0 || b == top)
            }
            Descriptor::Pentagon => {
                // 0 < x < y < 1 and 0 < z < 1.
                let names = ["0", "x", "y", "z", "1"].map(String::from).to_vec();
                let below = |a: usize, b: usize| a == b || a == 0 || b == 4 || (a, b) == (1, 2);
                Poset::from_relation(names, below)
            }
            Descriptor::Product(ref left, ref right) => {
                let l = left.poset(options)?;
                let r = right.poset(options)?;
                let (nl, nr) = (l.len(), r.len());
                let names = (0..nl * nr)
                    .map(|i| format!("{}×{}", l.name(i / nr), r.name(i % nr)))
                    .collect();
                Poset::from_relation(names, |a, b| l.leq(a / nr, b / nr) && r.leq(a % nr, b % nr))
            }
        }
    }

    fn unsupported(&self) -> Error {
        Error::UnsupportedSpec(self.to_string())
    }
}

fn atom_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("a{i}")
            }
        })
        .collect()
}

/// Restricted growth strings of length `n`, finest partition first.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(current: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let next = current.iter().max().map_or(0, |m| m + 1);
        for block in 0..=next {
            current.push(block);
            grow(current, n, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), n, &mut out);
    let blocks = |p: &Vec<usize>| p.iter().max().map_or(0, |m| m + 1);
    out.sort_by(|a, b| blocks(b).cmp(&blocks(a)).then_with(|| a.cmp(b)));
    out
}

fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    (0..fine.len()).all(|i| (0..fine.len()).all(|j| fine[i] != fine[j] || coarse[i] == coarse[j]))
}

fn partition_label(p: &[usize]) -> String {
    if p.is_empty() {
        return "∅".to_owned();
    }
    let blocks = p.iter().max().map_or(0, |m| m + 1);
    (0..blocks)
        .map(|b| {
            p.iter()
                .enumerate()
                .filter(|&(_, &x)| x == b)
                .map(|(i, _)| (i + 1).to_string())
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("|")
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Chain(n) => write!(f, "chain:{n}"),
            Descriptor::Boolean(n) => write!(f, "boolean:{n}"),
            Descriptor::Divisor(m) => write!(f, "divisor:{m}"),
            Descriptor::Partition(n) => write!(f, "partition:{n}"),
            Descriptor::Diamond(k) => write!(f, "diamond:{k}"),
            Descriptor::Pentagon => f.write_str("pentagon"),
            Descriptor::Product(l, r) => {
                if matches!(**l, Descriptor::Product(..)) {
                    write!(f, "product:({l}),{r}")
                } else {
                    write!(f, "product:{l},{r}")
                }
            }
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedSpec(s.to_owned());
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return inner.parse();
        }
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let number = || -> Result<usize> { arg.ok_or_else(bad)?.trim().parse().map_err(|_| bad()) };
        match kind {
            "chain" => Ok(Descriptor::Chain(number()?)),
            "boolean" => Ok(Descriptor::Boolean(number()?)),
            "divisor" => Ok(Descriptor::Divisor(number()? as u64)),
            "partition" => Ok(Descriptor::Partition(number()?)),
            "diamond" => Ok(Descriptor::Diamond(number()?)),
            "m3" | "M3" if arg.is_none() => Ok(Descriptor::Diamond(3)),
            "pentagon" | "n5" | "N5" if arg.is_none() => Ok(Descriptor::Pentagon),
            "product" => {
                let arg = arg.ok_or_else(bad)?;
                let split = top_level_comma(arg).ok_or_else(bad)?;
                let left = arg[..split].parse()?;
                let right = arg[split + 1..].parse()?;
                Ok(Descriptor::Product(Box::new(left), Box::new(right)))
            }
            _ => Err(bad()),
        }
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// Parses a descriptor string and builds the lattice.
pub fn generate(descriptor: &str) -> Result<Lattice> {
    descriptor.parse::<Descriptor>()?.generate()
}
