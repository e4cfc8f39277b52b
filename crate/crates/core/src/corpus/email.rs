//! Assigning the unattributed e-mail addresses of a paper to its byline.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::name::PersonName;

/// Lowercases and trims an address. Returns `None` when it has no local
/// part or no domain.
pub fn normalize_email(raw: &str) -> Option<String> {
    let email = raw.trim().to_lowercase();
    let (local, domain) = email.rsplit_once('@')?;
    if local.is_empty() || domain.is_empty() {
        return None;
    }
    Some(email)
}

/// The part of a (normalized) address before the last `@`.
pub fn local_part(email: &str) -> &str {
    email.rsplit_once('@').map_or(email, |(local, _)| local)
}

/// Local part with every non-alphabetic character removed.
pub fn alpha_local_part(email: &str) -> String {
    local_part(email)
        .chars()
        .filter(char::is_ascii_alphabetic)
        .collect()
}

/// Strings derived from a name that an author plausibly uses as the local
/// part of an address. Examples are for "Mark E. J. Nolan".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmailCandidate {
    /// `markejnolan`
    ForenamesSurname,
    /// `marknolan`
    FirstForenameSurname,
    /// `mejnolan`
    InitialsSurname,
    /// `mnolan`
    FirstInitialSurname,
    /// `markn`
    FirstForenameSurnameInitial,
    /// `mark`, only when at least four letters long
    FirstForename,
    /// `mejn`; differs from `InitialsSurnameInitial` for compound surnames
    AllInitials,
    /// `mejn`
    InitialsSurnameInitial,
}

impl EmailCandidate {
    pub const DEFAULT_SET: [EmailCandidate; 8] = [
        EmailCandidate::ForenamesSurname,
        EmailCandidate::FirstForenameSurname,
        EmailCandidate::InitialsSurname,
        EmailCandidate::FirstInitialSurname,
        EmailCandidate::FirstForenameSurnameInitial,
        EmailCandidate::FirstForename,
        EmailCandidate::AllInitials,
        EmailCandidate::InitialsSurnameInitial,
    ];
}

/// How strongly a candidate string identifies a name. Lower is stronger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateRank {
    /// Embeds the full surname or a full forename.
    FullString,
    /// Built from initials only.
    Initials,
}

/// Generates the candidate strings of `name` for every kind in `kinds`,
/// each with the rank it carries. Strings shorter than two letters are
/// dropped.
pub fn email_candidates(
    name: &PersonName,
    kinds: &[EmailCandidate],
) -> Vec<(String, CandidateRank)> {
    let alpha = |s: &str| -> String { s.chars().filter(char::is_ascii_alphabetic).collect() };
    let forenames: Vec<String> = name
        .forename
        .split_whitespace()
        .map(alpha)
        .filter(|t| !t.is_empty())
        .collect();
    let surname_tokens: Vec<String> = name
        .surname
        .split_whitespace()
        .map(alpha)
        .filter(|t| !t.is_empty())
        .collect();
    let surname: String = surname_tokens.concat();
    let initials: String = forenames.iter().filter_map(|t| t.chars().next()).collect();
    let surname_initial: String = surname.chars().take(1).collect();
    let first = forenames.first().cloned().unwrap_or_default();
    let first_is_full = first.len() >= 2;

    let mut out = Vec::new();
    for kind in kinds {
        use CandidateRank::*;
        let cand = match kind {
            EmailCandidate::ForenamesSurname => Some((forenames.concat() + &surname, FullString)),
            EmailCandidate::FirstForenameSurname => Some((first.clone() + &surname, FullString)),
            EmailCandidate::InitialsSurname => Some((initials.clone() + &surname, FullString)),
            EmailCandidate::FirstInitialSurname => Some((
                first.chars().take(1).collect::<String>() + &surname,
                FullString,
            )),
            EmailCandidate::FirstForenameSurnameInitial if !first.is_empty() => {
                let rank = if first_is_full { FullString } else { Initials };
                Some((first.clone() + &surname_initial, rank))
            }
            EmailCandidate::FirstForename if first.len() >= 4 => Some((first.clone(), FullString)),
            EmailCandidate::AllInitials => {
                let sur: String = surname_tokens
                    .iter()
                    .filter_map(|t| t.chars().next())
                    .collect();
                Some((initials.clone() + &sur, Initials))
            }
            EmailCandidate::InitialsSurnameInitial => {
                Some((initials.clone() + &surname_initial, Initials))
            }
            _ => None,
        };
        if let Some((s, rank)) = cand {
            if s.len() >= 2 {
                out.push((s, rank));
            }
        }
    }
    out
}

/// Assigns the addresses listed on one paper to byline positions.
///
/// Each address's alphabetic local part is compared against the candidate
/// strings of every author. Full-string candidates outrank initial-based
/// ones; an address whose best rank is shared by two or more authors stays
/// unassigned, as does every address of an author who would receive two
/// or more. Returns `(position, address)` sorted by position.
pub fn assign_emails(
    byline: &[PersonName],
    emails: &[String],
    kinds: &[EmailCandidate],
) -> Vec<(usize, String)> {
    let mut unique: Vec<String> = Vec::new();
    for e in emails.iter().filter_map(|e| normalize_email(e)) {
        if !unique.contains(&e) {
            unique.push(e);
        }
    }
    if unique.is_empty() {
        return Vec::new();
    }

    let per_author: Vec<HashMap<String, CandidateRank>> = byline
        .iter()
        .map(|name| {
            let mut best: HashMap<String, CandidateRank> = HashMap::new();
            for (s, rank) in email_candidates(name, kinds) {
                best.entry(s)
                    .and_modify(|r| *r = (*r).min(rank))
                    .or_insert(rank);
            }
            best
        })
        .collect();

    let mut owner_of: Vec<(usize, String)> = Vec::new();
    for email in unique {
        let key = alpha_local_part(&email);
        if key.is_empty() {
            continue;
        }
        let matches: Vec<(CandidateRank, usize)> = per_author
            .iter()
            .enumerate()
            .filter_map(|(pos, cands)| cands.get(&key).map(|r| (*r, pos)))
            .collect();
        let Some(best) = matches.iter().map(|(r, _)| *r).min() else {
            continue;
        };
        let mut winners = matches.iter().filter(|(r, _)| *r == best);
        if let (Some((_, pos)), None) = (winners.next(), winners.next()) {
            owner_of.push((*pos, email));
        }
    }

    let mut counts = vec![0usize; byline.len()];
    for (pos, _) in &owner_of {
        counts[*pos] += 1;
    }
    owner_of.retain(|(pos, _)| counts[*pos] == 1);
    owner_of.sort();
    owner_of
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(raw: &[&str]) -> Vec<PersonName> {
        raw.iter().map(|r| PersonName::parse(r).unwrap()).collect()
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn candidate_strings_for_nolan() {
        let n = PersonName::parse("Mark E. J. Nolan").unwrap();
        let c: Vec<String> = email_candidates(&n, &EmailCandidate::DEFAULT_SET)
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        for expected in ["mejnolan", "mnolan", "markn", "mejn", "markejnolan", "mark"] {
            assert!(
                c.contains(&expected.to_string()),
                "missing {expected}: {c:?}"
            );
        }
    }

    #[test]
    fn assigns_by_initials() {
        let byline = names(&["Steven H. Strogatz", "Mark E. J. Nolan"]);
        let got = assign_emails(
            &byline,
            &strings(&["mejn@northu.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert_eq!(got, vec![(1, "mejn@northu.edu".to_string())]);
    }

    #[test]
    fn local_part_punctuation_and_digits_are_ignored() {
        let byline = names(&["Mark Nolan"]);
        let got = assign_emails(
            &byline,
            &strings(&["M.Nolan-2@X.org "]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert_eq!(got, vec![(0, "m.nolan-2@x.org".to_string())]);
    }

    #[test]
    fn no_emails_no_assignments() {
        let byline = names(&["Mark Nolan"]);
        assert!(assign_emails(&byline, &[], &EmailCandidate::DEFAULT_SET).is_empty());
    }

    #[test]
    fn author_matching_two_addresses_is_excluded() {
        let byline = names(&["Mark Nolan", "Duncan Watts"]);
        let got = assign_emails(
            &byline,
            &strings(&["mnolan@a.edu", "marknolan@b.edu", "dwatts@c.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert_eq!(got, vec![(1, "dwatts@c.edu".to_string())]);
    }

    #[test]
    fn full_string_outranks_initials() {
        // "markk" is a full-string candidate for Mark Kim but only an
        // initials candidate for M. A. R. K. Kim
        let byline = names(&["M. A. R. K. Kim", "Mark Kim"]);
        let got = assign_emails(
            &byline,
            &strings(&["markk@x.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert_eq!(got, vec![(1, "markk@x.edu".to_string())]);
    }

    #[test]
    fn ties_at_the_same_rank_stay_unassigned() {
        let byline = names(&["Mike Nolan", "Mary Nolan"]);
        let got = assign_emails(
            &byline,
            &strings(&["mnolan@x.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert!(got.is_empty());
        let byline = names(&["Mike Nolan", "Mary Nash"]);
        let got = assign_emails(
            &byline,
            &strings(&["mn@x.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert!(got.is_empty());
    }

    #[test]
    fn duplicate_addresses_count_once() {
        let byline = names(&["Mark Nolan"]);
        let got = assign_emails(
            &byline,
            &strings(&["mnolan@x.edu", "MNolan@x.edu"]),
            &EmailCandidate::DEFAULT_SET,
        );
        assert_eq!(got.len(), 1);
    }
}
