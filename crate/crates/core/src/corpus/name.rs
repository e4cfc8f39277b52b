use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A normalized personal name: lowercase ASCII, punctuation replaced by
/// single spaces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PersonName {
    pub surname: String,
    pub forename: String,
}

impl PersonName {
    /// Normalizes a raw byline string. See [`normalize_name`].
    pub fn parse(raw: &str) -> Result<Self> {
        let (surname, forename) = normalize_name(raw)?;
        Ok(Self { surname, forename })
    }

    /// Builds a name from separately supplied parts, normalizing both.
    pub fn from_parts(surname: &str, forename: &str) -> Result<Self> {
        let surname = clean(
            &deunicode::deunicode(surname)
                .to_lowercase()
                .replace(',', " "),
        );
        let forename = clean(
            &deunicode::deunicode(forename)
                .to_lowercase()
                .replace(',', " "),
        );
        if surname.is_empty() {
            return Err(Error::EmptyName(format!("{surname}, {forename}")));
        }
        Ok(Self { surname, forename })
    }

    pub fn first_initial(&self) -> Option<char> {
        self.forename.chars().next()
    }

    /// First forename initial and full surname, e.g. `"m nolan"`.
    pub fn block_key(&self) -> String {
        match self.first_initial() {
            Some(c) => format!("{c} {}", self.surname),
            None => self.surname.clone(),
        }
    }

    /// Full forename and full surname, used when blocking on full names.
    pub fn full_key(&self) -> String {
        if self.forename.is_empty() {
            self.surname.clone()
        } else {
            format!("{} {}", self.forename, self.surname)
        }
    }
}

impl fmt::Display for PersonName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forename.is_empty() {
            write!(f, "{},", self.surname)
        } else {
            write!(f, "{}, {}", self.surname, self.forename)
        }
    }
}

fn clean(s: &str) -> String {
    let replaced: String = s
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { ' ' })
        .collect();
    replaced.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits a raw name into `(surname, forename)`.
///
/// The string is transliterated to ASCII and lowercased; every character
/// other than letters, digits and the first comma becomes whitespace, and
/// whitespace is collapsed. `"Surname, Forename"` order is recognised by
/// the comma; otherwise the last whitespace-delimited token is the surname.
pub fn normalize_name(raw: &str) -> Result<(String, String)> {
    let ascii = deunicode::deunicode(raw).to_lowercase();
    let (surname, forename) = match ascii.split_once(',') {
        Some((sur, fore)) => (clean(sur), clean(fore)),
        None => {
            let mut tokens: Vec<String> = ascii
                .split_whitespace()
                .map(clean)
                .filter(|t| !t.is_empty())
                .collect();
            match tokens.pop() {
                Some(last) => (last, tokens.join(" ")),
                None => (String::new(), String::new()),
            }
        }
    };
    if surname.is_empty() {
        return Err(Error::EmptyName(raw.to_string()));
    }
    Ok((surname, forename))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comma_order() {
        assert_eq!(
            normalize_name("Nolan, M.E.J.").unwrap(),
            ("nolan".into(), "m e j".into())
        );
        assert_eq!(
            normalize_name("Silva, Roberto").unwrap(),
            ("silva".into(), "roberto".into())
        );
    }

    #[test]
    fn last_token_is_surname() {
        assert_eq!(
            normalize_name("Mark Nolan").unwrap(),
            ("nolan".into(), "mark".into())
        );
        assert_eq!(
            normalize_name("M.E.J. Nolan").unwrap(),
            ("nolan".into(), "m e j".into())
        );
        // inverted order without a comma cannot be detected
        assert_eq!(
            normalize_name("Nolan M.").unwrap(),
            ("m".into(), "nolan".into())
        );
        assert_eq!(
            normalize_name("Ana Garcia-Lopez").unwrap(),
            ("garcia lopez".into(), "ana".into())
        );
    }

    #[test]
    fn diacritics_are_transliterated() {
        assert_eq!(
            normalize_name("José  Müller").unwrap(),
            ("muller".into(), "jose".into())
        );
    }

    #[test]
    fn whitespace_only_is_an_error() {
        assert!(normalize_name("   ").is_err());
        assert!(normalize_name("").is_err());
        assert!(normalize_name(" , John").is_err());
    }

    #[test]
    fn block_keys() {
        let n = PersonName::parse("Mark Nolan").unwrap();
        assert_eq!(n.block_key(), "m nolan");
        assert_eq!(n.full_key(), "mark nolan");
        assert_eq!(n.to_string(), "nolan, mark");
        let sole = PersonName::parse("Plato").unwrap();
        assert_eq!(sole.block_key(), "plato");
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(raw in "[ A-Za-zÀ-ÿ.,'-]{1,30}") {
            if let Ok(name) = PersonName::parse(&raw) {
                let again = PersonName::parse(&name.to_string()).unwrap();
                prop_assert_eq!(&again, &name);
                prop_assert_eq!(again.block_key(), name.block_key());
            }
        }
    }
}
