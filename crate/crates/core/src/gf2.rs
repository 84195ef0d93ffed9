//! GF(2) row reduction over bit-packed rows, with optional tracking of the
//! combination of inserted rows that produced each basis row.
//!
//! The basis is kept in reduced row-echelon form, so `reduce` returns a
//! canonical coset representative: two vectors reduce to the same output
//! iff they differ by an element of the span.

use crate::bits::Bits;

#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Bits>,
    pivots: Vec<usize>,
    /// combos[i] over inserted-row indices, parallel to rows. Only kept when
    /// tracking is enabled.
    combos: Option<Vec<Bits>>,
    capacity: usize,
    inserted: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: None,
            capacity: 0,
            inserted: 0,
        }
    }

    /// Track combinations over up to `capacity` inserted rows.
    pub fn with_tracking(ncols: usize, capacity: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Some(Vec::new()),
            capacity,
            inserted: 0,
        }
    }

    pub fn from_rows<'a>(ncols: usize, rows: impl IntoIterator<Item = &'a Bits>) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            let _ = e.insert(r.clone());
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Insert a row. Returns `Ok(rank_index)` if it was independent, or
    /// `Err(combo)` with a kernel combination: the set of inserted rows
    /// (including this one) whose sum is zero. Combos are only meaningful
    /// under tracking.
    pub fn insert(&mut self, row: Bits) -> Result<usize, Bits> {
        assert_eq!(row.len(), self.ncols);
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = match &self.combos {
            Some(_) => {
                assert!(idx < self.capacity, "tracking capacity exceeded");
                let mut c = Bits::zeros(self.capacity);
                c.set(idx, true);
                c
            }
            None => Bits::zeros(0),
        };
        let mut r = row;
        for (i, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.rows[i]);
                if let Some(combos) = &self.combos {
                    combo.xor_assign(&combos[i]);
                }
            }
        }
        match r.first_one() {
            None => Err(combo),
            Some(pivot) => {
                // Clear the new pivot column from every existing row to keep
                // the basis in reduced row-echelon form.
                for i in 0..self.rows.len() {
                    if self.rows[i].get(pivot) {
                        self.rows[i].xor_assign(&r);
                        if let Some(combos) = &mut self.combos {
                            let c = combo.clone();
                            combos[i].xor_assign(&c);
                        }
                    }
                }
                self.rows.push(r);
                self.pivots.push(pivot);
                if let Some(combos) = &mut self.combos {
                    combos.push(combo);
                }
                Ok(self.rows.len() - 1)
            }
        }
    }

    pub fn row(&self, i: usize) -> &Bits {
        &self.rows[i]
    }

    /// Canonical coset representative of `row` modulo the span.
    pub fn reduce(&self, row: &Bits) -> Bits {
        let mut r = row.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.rows[i]);
            }
        }
        r
    }

    pub fn contains(&self, row: &Bits) -> bool {
        self.reduce(row).is_zero()
    }

    /// If `row` is in the span, the combination of inserted rows producing
    /// it (requires tracking).
    pub fn combination_for(&self, row: &Bits) -> Option<Bits> {
        let combos = self
            .combos
            .as_ref()
            .expect("echelon built without tracking");
        let mut r = row.clone();
        let mut combo = Bits::zeros(self.capacity);
        for (i, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.rows[i]);
                combo.xor_assign(&combos[i]);
            }
        }
        if r.is_zero() {
            Some(combo)
        } else {
            None
        }
    }
}

/// Rank of a set of rows.
pub fn rank<'a>(ncols: usize, rows: impl IntoIterator<Item = &'a Bits>) -> usize {
    Echelon::from_rows(ncols, rows).rank()
}

/// Basis of the left kernel: combinations c with sum_i c_i rows_i = 0.
pub fn kernel_basis(ncols: usize, rows: &[Bits]) -> Vec<Bits> {
    let mut e = Echelon::with_tracking(ncols, rows.len());
    let mut kernel = Vec::new();
    for r in rows {
        if let Err(combo) = e.insert(r.clone()) {
            kernel.push(combo);
        }
    }
    kernel
}
