use std::fmt;

use serde::{Deserialize, Serialize};

/// A congruence predicate on positive integers: `n mod modulus ∈ residues`
/// and no listed prime divides `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFilter {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub excluded_divisors: Vec<u64>,
}

impl CongruenceFilter {
    /// Accepts every positive integer.
    pub fn all() -> Self {
        CongruenceFilter {
            modulus: 1,
            residues: vec![0],
            excluded_divisors: Vec::new(),
        }
    }

    pub fn residues(modulus: u64, residues: &[u64]) -> Self {
        CongruenceFilter {
            modulus,
            residues: residues.to_vec(),
            excluded_divisors: Vec::new(),
        }
    }

    pub fn excluding(mut self, divisors: &[u64]) -> Self {
        self.excluded_divisors.extend_from_slice(divisors);
        self
    }

    pub fn accepts(&self, n: u64) -> bool {
        let m = self.modulus.max(1);
        self.residues.contains(&(n % m)) && self.excluded_divisors.iter().all(|&p| n % p != 0)
    }
}

impl Default for CongruenceFilter {
    fn default() -> Self {
        CongruenceFilter::all()
    }
}

impl fmt::Display for CongruenceFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.modulus > 1 {
            let rs: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
            parts.push(format!("n mod {} in {{{}}}", self.modulus, rs.join(",")));
        }
        for p in &self.excluded_divisors {
            parts.push(format!("{p} does not divide n"));
        }
        if parts.is_empty() {
            f.write_str("all n")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}
