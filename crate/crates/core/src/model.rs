//! Instance parameters, `(a,b)`-triples and colorings of `[1,n]`.
//!
//! An `(a,b)`-triple is `(x, ax+d, bx+2d)` with `x, d >= 1`. Equivalently it is
//! an integer solution of `z = 2y + (b-2a)x` with `y > ax`, which is how the
//! enumeration below is cross-checked in the tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported color count. Color sets are stored as `u64` masks.
pub const MAX_COLORS: usize = 64;

/// The instance `(a, b, r)`: triple coefficients and number of colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    a: usize,
    b: usize,
    r: usize,
}

impl Params {
    pub fn new(a: usize, b: usize, r: usize) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidParams("a must be at least 1".into()));
        }
        if a > b {
            return Err(Error::InvalidParams(format!("a = {a} exceeds b = {b}")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        if r > MAX_COLORS {
            return Err(Error::InvalidParams(format!(
                "r = {r} exceeds the supported maximum of {MAX_COLORS}"
            )));
        }
        Ok(Params { a, b, r })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Same pair, different number of colors.
    pub fn with_colors(&self, r: usize) -> Result<Self> {
        Params::new(self.a, self.b, r)
    }

    /// The smallest triple `(1, a+1, b+2)`; its largest element is the least
    /// `n` for which `[1,n]` contains any triple at all.
    pub fn first_triple(&self) -> Triple {
        Triple::from_xd(self, 1, 1)
    }
}

/// An `(a,b)`-triple `x < y < z` together with its gap `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub d: usize,
}

impl Triple {
    pub fn from_xd(params: &Params, x: usize, d: usize) -> Self {
        debug_assert!(x >= 1 && d >= 1);
        Triple {
            x,
            y: params.a * x + d,
            z: params.b * x + 2 * d,
            d,
        }
    }

    pub fn elements(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }
}

/// Triples whose largest element is exactly `z`, in increasing `x`.
pub fn triples_with_max(params: &Params, z: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for_each_triple_with_max(params, z, |t| out.push(t));
    out
}

pub(crate) fn for_each_triple_with_max(params: &Params, z: usize, mut f: impl FnMut(Triple)) {
    if z < 3 {
        return;
    }
    // need b*x + 2 <= z, i.e. x <= (z - 2) / b
    let max_x = (z - 2) / params.b;
    for x in 1..=max_x {
        let rest = z - params.b * x;
        if rest.is_multiple_of(2) {
            f(Triple::from_xd(params, x, rest / 2));
        }
    }
}

/// All triples inside `[1,n]`, sorted by `(z, x)`.
pub fn enumerate_triples(params: &Params, n: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for z in 1..=n {
        for_each_triple_with_max(params, z, |t| out.push(t));
    }
    out
}

/// A total coloring of `[1,n]` with colors `0..r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    params: Params,
    colors: Vec<u8>,
}

impl Coloring {
    pub fn new(params: Params, colors: Vec<u8>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::InvalidColoring("n must be at least 1".into()));
        }
        if let Some((i, c)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c as usize >= params.r)
        {
            return Err(Error::InvalidColoring(format!(
                "color {c} at position {} is not below r = {}",
                i + 1,
                params.r
            )));
        }
        Ok(Coloring { params, colors })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    /// Color of the integer `i` (1-based).
    pub fn color(&self, i: usize) -> u8 {
        self.colors[i - 1]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Restriction to `[1,m]`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n() {
            return Err(Error::InvalidColoring(format!(
                "cannot restrict a coloring of [1,{}] to [1,{m}]",
                self.n()
            )));
        }
        Coloring::new(self.params, self.colors[..m].to_vec())
    }

    /// Appends one more integer with the given color.
    pub fn extended(&self, color: u8) -> Result<Self> {
        let mut colors = self.colors.clone();
        colors.push(color);
        Coloring::new(self.params, colors)
    }

    /// The monochromatic triple minimal in `(z, x)` order, if any.
    pub fn find_mono_triple(&self) -> Option<Triple> {
        self.find_mono_triple_upto(self.n())
    }

    pub(crate) fn find_mono_triple_upto(&self, m: usize) -> Option<Triple> {
        let m = m.min(self.n());
        for z in 3..=m {
            if let Some(t) = self.mono_triple_with_max(z) {
                return Some(t);
            }
        }
        None
    }

    /// First monochromatic triple whose largest element is `z`.
    pub fn mono_triple_with_max(&self, z: usize) -> Option<Triple> {
        let mut found = None;
        let cz = self.color(z);
        for_each_triple_with_max(&self.params, z, |t| {
            if found.is_none() && self.color(t.x) == cz && self.color(t.y) == cz {
                found = Some(t);
            }
        });
        found
    }

    pub fn is_valid(&self) -> bool {
        self.find_mono_triple().is_none()
    }

    /// Relabels colors through `perm` (`perm[old] = new`).
    pub fn relabel(&self, perm: &[u8]) -> Result<Self> {
        let colors = self.colors.iter().map(|&c| perm[c as usize]).collect();
        Coloring::new(self.params, colors)
    }

    pub fn to_witness(&self) -> WitnessFile {
        WitnessFile {
            a: self.params.a as u64,
            b: self.params.b as u64,
            r: self.params.r as u64,
            n: self.n() as u64,
            colors: self.colors.iter().map(|&c| c as u64).collect(),
            label: None,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_witness().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: WitnessFile = serde_json::from_str(text)?;
        w.into_coloring()
    }
}

/// Search state: every integer is either colored or unassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    params: Params,
    colors: Vec<Option<u8>>,
}

impl PartialColoring {
    pub fn new(params: Params, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidColoring("n must be at least 1".into()));
        }
        Ok(PartialColoring {
            params,
            colors: vec![None; n],
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.colors[i - 1]
    }

    pub fn set(&mut self, i: usize, color: Option<u8>) -> Result<()> {
        if let Some(c) = color {
            if c as usize >= self.params.r {
                return Err(Error::InvalidColoring(format!(
                    "color {c} is not below r = {}",
                    self.params.r
                )));
            }
        }
        if i == 0 || i > self.n() {
            return Err(Error::InvalidColoring(format!(
                "position {i} outside [1,{}]",
                self.n()
            )));
        }
        self.colors[i - 1] = color;
        Ok(())
    }

    pub fn assigned(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    /// A triple whose three elements are assigned the same color.
    pub fn find_mono_triple(&self) -> Option<Triple> {
        let mut found = None;
        for z in 3..=self.n() {
            let Some(cz) = self.get(z) else { continue };
            for_each_triple_with_max(&self.params, z, |t| {
                if found.is_none() && self.get(t.x) == Some(cz) && self.get(t.y) == Some(cz) {
                    found = Some(t);
                }
            });
            if found.is_some() {
                break;
            }
        }
        found
    }

    pub fn into_coloring(self) -> Result<Coloring> {
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| Error::InvalidColoring(format!("position {} is unassigned", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Coloring::new(self.params, colors)
    }
}

impl From<&Coloring> for PartialColoring {
    fn from(c: &Coloring) -> Self {
        PartialColoring {
            params: c.params,
            colors: c.colors.iter().map(|&x| Some(x)).collect(),
        }
    }
}

/// On-disk witness format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub a: u64,
    pub b: u64,
    pub r: u64,
    pub n: u64,
    pub colors: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl WitnessFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serialization cannot fail")
    }

    pub fn into_coloring(self) -> Result<Coloring> {
        let conv = |v: u64, what: &str| {
            usize::try_from(v)
                .map_err(|_| Error::InvalidParams(format!("{what} = {v} is too large")))
        };
        let params = Params::new(conv(self.a, "a")?, conv(self.b, "b")?, conv(self.r, "r")?)?;
        if self.n == 0 {
            return Err(Error::InvalidColoring("n must be at least 1".into()));
        }
        if self.colors.len() as u64 != self.n {
            return Err(Error::InvalidColoring(format!(
                "n = {} but {} colors given",
                self.n,
                self.colors.len()
            )));
        }
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c >= self.r {
                    Err(Error::InvalidColoring(format!(
                        "color {c} at position {} is not below r = {}",
                        i + 1,
                        self.r
                    )))
                } else {
                    Ok(c as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Coloring::new(params, colors)
    }
}
