use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::GroupCalcError;

/// A freely reduced word in a free group with numbered generators.
///
/// Letters are `(generator index, ±1)`. Construction reduces, so two
/// words are equal in the group iff they are `==`. Text syntax:
/// space-separated letters, `a`–`z` for generators 0–25 and `A`–`Z`
/// for their inverses (`g7`/`G7` past that); `1` is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FreeWord {
    letters: Vec<(u16, i8)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(index: u16) -> Self {
        FreeWord {
            letters: vec![(index, 1)],
        }
    }

    /// Reduce an arbitrary letter sequence. Signs must be ±1.
    pub fn from_letters(letters: impl IntoIterator<Item = (u16, i8)>) -> Self {
        let mut stack: Vec<(u16, i8)> = Vec::new();
        for (gen, sign) in letters {
            debug_assert!(sign == 1 || sign == -1);
            match stack.last() {
                Some(&(g, s)) if g == gen && s == -sign => {
                    stack.pop();
                }
                _ => stack.push((gen, sign)),
            }
        }
        FreeWord { letters: stack }
    }

    pub fn letters(&self) -> &[(u16, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(g, s)| (g, -s))
                .collect(),
        }
    }

    /// Group multiplication (concatenate, cancel at the seam).
    pub fn mul(&self, rhs: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        for &(g, s) in &rhs.letters {
            match letters.last() {
                Some(&(lg, ls)) if lg == g && ls == -s => {
                    letters.pop();
                }
                _ => letters.push((g, s)),
            }
        }
        FreeWord { letters }
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<u16> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    /// Error unless every letter fits inside rank `ambient`.
    pub fn check_rank(&self, ambient: usize) -> Result<(), GroupCalcError> {
        match self.max_generator() {
            Some(g) if (g as usize) >= ambient => Err(GroupCalcError::GeneratorOutOfRange {
                found: g as usize,
                ambient,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, s)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if g < 26 {
                let ch = (b'a' + g as u8) as char;
                if s > 0 {
                    write!(f, "{ch}")?;
                } else {
                    write!(f, "{}", ch.to_ascii_uppercase())?;
                }
            } else if s > 0 {
                write!(f, "g{g}")?;
            } else {
                write!(f, "G{g}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = GroupCalcError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| GroupCalcError::ParseWord {
            input: input.to_string(),
            reason,
        };
        let tokens: Vec<&str> = input.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(err("empty string (write 1 for the identity)".into()));
        }
        if tokens == ["1"] {
            return Ok(FreeWord::identity());
        }
        let mut letters = Vec::with_capacity(tokens.len());
        for tok in tokens {
            let mut chars = tok.chars();
            let head = chars.next().expect("token is nonempty");
            let rest = chars.as_str();
            let letter = match head {
                'a'..='z' if rest.is_empty() && head != 'g' => {
                    (head as u16 - 'a' as u16, 1)
                }
                'A'..='Z' if rest.is_empty() && head != 'G' => {
                    (head as u16 - 'A' as u16, -1)
                }
                'g' if rest.is_empty() => (6, 1),
                'G' if rest.is_empty() => (6, -1),
                'g' | 'G' => {
                    let idx: u16 = rest
                        .parse()
                        .map_err(|_| err(format!("bad generator token {tok:?}")))?;
                    (idx, if head == 'g' { 1 } else { -1 })
                }
                _ => return Err(err(format!("bad letter {tok:?}"))),
            };
            letters.push(letter);
        }
        Ok(FreeWord::from_letters(letters))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}
