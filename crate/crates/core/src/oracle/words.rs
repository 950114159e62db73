use std::fmt;

use num_complex::Complex64;

use crate::algebra::{DeformationParams, ModelSpec};
use crate::error::{Error, Result};

/// Longest word accepted, counting `X^k` and `P^{±k}` as `k` letters.
pub const MAX_WORD_LEN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    X,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub symbol: Symbol,
    pub power: i32,
}

/// Product of factors, read left to right as an operator product; the
/// rightmost factor acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Factor>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|f| f.power.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn x_count(&self) -> usize {
        self.0.iter().filter(|f| f.symbol == Symbol::X).map(|f| f.power as usize).sum()
    }

    pub fn has_inverse_momentum(&self) -> bool {
        self.0.iter().any(|f| f.symbol == Symbol::P && f.power < 0)
    }

    fn validate(&self) -> Result<()> {
        for f in &self.0 {
            match f.symbol {
                Symbol::X if f.power < 0 => return Err(Error::InvalidParameter("negative power of X".into())),
                Symbol::P if f.power < -2 => return Err(Error::InvalidParameter("P powers below -2".into())),
                _ => {}
            }
        }
        if self.len() > MAX_WORD_LEN {
            return Err(Error::InvalidParameter(format!("word {self} longer than {MAX_WORD_LEN}")));
        }
        Ok(())
    }

    /// Single letters, rightmost first, each `(symbol, ±1)`.
    pub fn letters_right_to_left(&self) -> Vec<(Symbol, i32)> {
        let mut out = Vec::new();
        for f in self.0.iter().rev() {
            for _ in 0..f.power.unsigned_abs() {
                out.push((f.symbol, f.power.signum()));
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for fac in &self.0 {
            let s = match fac.symbol {
                Symbol::X => "X",
                Symbol::P => "P",
            };
            if fac.power == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{}", fac.power)?;
            }
        }
        Ok(())
    }
}

/// Linear combination of words.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub terms: Vec<(Complex64, Word)>,
}

impl Observable {
    pub fn word(w: Word) -> Self {
        Observable {
            terms: vec![(Complex64::new(1.0, 0.0), w)],
        }
    }

    /// `K P² + Λ X² + γ (XP + PX) + C P⁻² + E₀` of the model.
    pub fn hamiltonian(model: ModelSpec, params: &DeformationParams) -> Self {
        let h = model.hamiltonian(params);
        let one = |s, p| Factor { symbol: s, power: p };
        let mut terms = vec![
            (Complex64::new(h.kinetic, 0.0), Word(vec![one(Symbol::P, 2)])),
            (Complex64::new(h.x2, 0.0), Word(vec![one(Symbol::X, 2)])),
        ];
        if h.xp.norm() != 0.0 {
            terms.push((h.xp, Word(vec![one(Symbol::X, 1), one(Symbol::P, 1)])));
            terms.push((h.xp, Word(vec![one(Symbol::P, 1), one(Symbol::X, 1)])));
        }
        if h.inv_p2 != 0.0 {
            terms.push((Complex64::new(h.inv_p2, 0.0), Word(vec![one(Symbol::P, -2)])));
        }
        if h.constant != 0.0 {
            terms.push((Complex64::new(h.constant, 0.0), Word::identity()));
        }
        Observable { terms }
    }

    /// Parse `"X^2"`, `"XP+PX"`, `"P^-2"`, `"1"` or `"H"`; `H` expands to the
    /// model Hamiltonian.
    pub fn parse(src: &str, model: ModelSpec, params: &DeformationParams) -> Result<Self> {
        let mut terms = Vec::new();
        for raw in src.split('+') {
            let term = raw.trim();
            if term.eq_ignore_ascii_case("h") {
                terms.extend(Observable::hamiltonian(model, params).terms);
                continue;
            }
            let w = parse_word(term)?;
            w.validate()?;
            terms.push((Complex64::new(1.0, 0.0), w));
        }
        Ok(Observable { terms })
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

fn parse_word(src: &str) -> Result<Word> {
    let bad = || Error::InvalidParameter(format!("cannot parse operator word {src:?}"));
    if src == "1" || src.eq_ignore_ascii_case("i") {
        return Ok(Word::identity());
    }
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut out = Vec::new();
    let mut j = 0;
    while j < chars.len() {
        let symbol = match chars[j].to_ascii_uppercase() {
            'X' => Symbol::X,
            'P' => Symbol::P,
            _ => return Err(bad()),
        };
        j += 1;
        let mut power = 1;
        if j < chars.len() && chars[j] == '^' {
            j += 1;
            let start = j;
            if j < chars.len() && chars[j] == '-' {
                j += 1;
            }
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[start..j].iter().collect();
            power = s.parse().map_err(|_| bad())?;
            if power == 0 {
                continue;
            }
        }
        match out.last_mut() {
            Some(Factor { symbol: s, power: p }) if *s == symbol && (*p > 0) == (power > 0) => *p += power,
            _ => out.push(Factor { symbol, power }),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(Word(out))
}
