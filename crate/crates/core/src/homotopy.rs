//! Homotopy signatures: reduced words in the free group over the generator
//! rays, and the crossing map from polylines to words.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::environment::Generator;
use crate::error::{Error, Result};
use crate::geometry::{orient, Orientation, Point, Polyline, EPS};

/// A reduced word. Letter `+i` is `s_i`, `-i` is its inverse; indices are
/// 1-based positions in the generator list. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Signature(Vec<i32>);

impl Signature {
    pub fn identity() -> Self {
        Signature(Vec::new())
    }

    /// Free reduction of an arbitrary word whose letters index `1..=m`.
    pub fn reduce(raw: &[i32], m: usize) -> Result<Self> {
        if let Some(&bad) = raw.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > m) {
            return Err(Error::IndexOutOfRange { index: bad, max: m });
        }
        Ok(Self::reduce_unchecked(raw.iter().copied()))
    }

    fn reduce_unchecked(raw: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in raw {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Signature(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Group product: reduced concatenation.
    pub fn concat(&self, other: &Signature) -> Signature {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Signature(out)
    }

    pub fn invert(&self) -> Signature {
        Signature(self.0.iter().rev().map(|l| -l).collect())
    }
}

/// Shorter words first, then letter by letter with `s_i < s_i^-1 < s_(i+1)`.
impl Ord for Signature {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |l: &i32| (l.unsigned_abs(), *l < 0);
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(key).cmp(other.0.iter().map(key)))
    }
}

impl PartialOrd for Signature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if *l > 0 {
                write!(f, "s{l}")?;
            } else {
                write!(f, "s{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut word = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok
                .strip_prefix('s')
                .ok_or_else(|| Error::Parse(format!("bad signature letter {tok:?}")))?;
            let (idx, inv) = match body.strip_suffix("^-1") {
                Some(i) => (i, true),
                None => (body, false),
            };
            let i: i32 = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad signature letter {tok:?}")))?;
            if i <= 0 {
                return Err(Error::Parse(format!("bad signature letter {tok:?}")));
            }
            word.push(if inv { -i } else { i });
        }
        Ok(Signature::reduce_unchecked(word))
    }
}

impl TryFrom<String> for Signature {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Signature> for String {
    fn from(s: Signature) -> String {
        s.to_string()
    }
}

/// Side of `p` relative to the generator's supporting line: +1 left, -1 right.
fn side(g: &Generator, p: Point) -> i32 {
    orient(g.origin, g.far, p).sign()
}

/// Letter contributed by the segment `a -> b` crossing generator `index`
/// (1-based), or `None`. Endpoints must be off the generator's line or off the
/// ray itself; `Err(())` signals an endpoint on the ray.
pub(crate) fn crossing_letter(a: Point, b: Point, g: &Generator, index: i32) -> std::result::Result<Option<i32>, ()> {
    let sa = side(g, a);
    let sb = side(g, b);
    if sa == 0 && g.contains(a) || sb == 0 && g.contains(b) {
        return Err(());
    }
    Ok(transversal(a, b, sa, sb, g, index))
}

/// Same as [`crossing_letter`] but points on the supporting line count as
/// lying on its left, so every move is classified.
pub(crate) fn crossing_letter_left_biased(a: Point, b: Point, g: &Generator, index: i32) -> Option<i32> {
    let bias = |s: i32| if s == 0 { 1 } else { s };
    transversal(a, b, bias(side(g, a)), bias(side(g, b)), g, index)
}

fn transversal(a: Point, b: Point, sa: i32, sb: i32, g: &Generator, index: i32) -> Option<i32> {
    if sa == 0 || sb == 0 || sa == sb {
        return None;
    }
    // The supporting line is crossed; check the crossing lies on the ray.
    let so = orient(a, b, g.origin);
    let sf = orient(a, b, g.far);
    if so == sf && so != Orientation::Collinear {
        return None;
    }
    Some(if sa > 0 { index } else { -index })
}

/// Raw crossing word of a polyline (no perturbation), or the index of the
/// first vertex lying on a generator ray.
fn raw_word(points: &[Point], generators: &[Generator]) -> std::result::Result<Vec<i32>, usize> {
    let mut word = Vec::new();
    for (k, w) in points.windows(2).enumerate() {
        // Letters of one segment are ordered along the segment.
        let mut hits: Vec<(f64, i32)> = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            match crossing_letter(w[0], w[1], g, gi as i32 + 1) {
                Ok(Some(l)) => {
                    let t = crossing_parameter(w[0], w[1], g);
                    hits.push((t, l));
                }
                Ok(None) => {}
                Err(()) => {
                    let bad = if g.contains(w[0]) { k } else { k + 1 };
                    return Err(bad);
                }
            }
        }
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        word.extend(hits.into_iter().map(|h| h.1));
    }
    Ok(word)
}

fn crossing_parameter(a: Point, b: Point, g: &Generator) -> f64 {
    let d = b - a;
    let e = g.far - g.origin;
    let denom = d.cross(e);
    if denom == 0.0 {
        0.0
    } else {
        (g.origin - a).cross(e) / denom
    }
}

/// Signature of a path: generator crossings in path order, reduced.
///
/// A path vertex lying exactly on a ray is slid by `10 * EPS` along an
/// incident segment that is not collinear with the ray; if that does not
/// clear every ray the call fails with `VERTEX_ON_GENERATOR`.
pub fn signature_of_path(path: &Polyline, generators: &[Generator]) -> Result<Signature> {
    let mut pts = path.points.clone();
    if let Ok(w) = raw_word(&pts, generators) {
        return Ok(Signature::reduce_unchecked(w));
    }
    let original = pts.clone();
    for k in 0..pts.len() {
        let on: Vec<&Generator> = generators.iter().filter(|g| g.contains(original[k])).collect();
        if on.is_empty() {
            continue;
        }
        let mut neighbours = Vec::new();
        if k + 1 < original.len() {
            neighbours.push(original[k + 1]);
        }
        if k > 0 {
            neighbours.push(original[k - 1]);
        }
        let target = neighbours
            .into_iter()
            .find(|n| on.iter().all(|g| side(g, *n) != 0));
        match target {
            Some(n) => {
                let step = 10.0 * EPS;
                let d = n - original[k];
                let len = d.norm();
                pts[k] = original[k] + d.scale(step.min(0.5 * len) / len);
            }
            None => return Err(Error::VertexOnGenerator(k)),
        }
    }
    raw_word(&pts, generators)
        .map(Signature::reduce_unchecked)
        .map_err(Error::VertexOnGenerator)
}
