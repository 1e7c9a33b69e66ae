use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FormError;

const VARS: [char; 4] = ['x', 'y', 'z', 'w'];

/// An integer matrix `T` used as a linear change of variables `x ↦ T·x`.
///
/// A form `Q` in `rows` variables pulls back along `T` to a form in `cols`
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl Substitution {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, FormError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 {
            return Err(FormError::ArityMismatch { expected: 1, got: 0 });
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(FormError::ArityMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Ok(Substitution {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds `T` from its columns, i.e. the images of the unit vectors.
    pub fn from_columns(columns: &[Vec<i64>]) -> Result<Self, FormError> {
        let c = columns.len();
        let r = columns.first().map_or(0, |col| col.len());
        let rows = (0..r)
            .map(|i| columns.iter().map(|col| col[i]).collect())
            .collect();
        let t = Substitution::from_rows(rows)?;
        debug_assert_eq!(t.cols, c);
        Ok(t)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Substitution {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols, "substitution arity");
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · other`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution, FormError> {
        if self.cols != other.rows {
            return Err(FormError::ArityMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut entries = vec![0; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                entries[i * other.cols + j] =
                    (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Ok(Substitution {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn transpose(&self) -> Substitution {
        let mut entries = vec![0; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.get(i, j);
            }
        }
        Substitution {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Renders the substitution as an argument list in the source variables,
    /// e.g. `(2y+3z, x+3w, x-2w, y-z)`.
    pub fn as_arguments(&self) -> String {
        let name = |j: usize| {
            if self.cols <= VARS.len() {
                VARS[j].to_string()
            } else {
                format!("x{}", j + 1)
            }
        };
        let args: Vec<String> = self
            .row_vecs()
            .iter()
            .map(|row| {
                let mut s = String::new();
                for (j, &c) in row.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if c < 0 {
                        s.push('-');
                    } else if !s.is_empty() {
                        s.push('+');
                    }
                    if c.abs() != 1 {
                        s.push_str(&c.abs().to_string());
                    }
                    s.push_str(&name(j));
                }
                if s.is_empty() {
                    s.push('0');
                }
                s
            })
            .collect();
        format!("({})", args.join(", "))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_arguments())
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        Substitution::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
