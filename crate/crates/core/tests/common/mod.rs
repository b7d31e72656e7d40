//! Helpers shared by the integration tests. Nothing here calls into the
//! solver, so the tests can use it as an independent reference.

#![allow(dead_code)]

/// Small DPLL with unit propagation over a plain clause list. Returns a
/// model (`model[v-1]` is variable `v`) or `None` when unsatisfiable.
pub fn dpll(num_vars: usize, clauses: &[Vec<i64>]) -> Option<Vec<bool>> {
    let mut occ = vec![Vec::new(); 2 * num_vars + 2];
    for (ci, c) in clauses.iter().enumerate() {
        if c.is_empty() {
            return None;
        }
        for &l in c {
            occ[lit_index(l)].push(ci);
        }
    }
    let mut s = Dpll {
        clauses,
        occ,
        value: vec![0; num_vars + 1],
        trail: Vec::new(),
    };
    for c in clauses {
        if c.len() == 1 && !s.enqueue_and_propagate(c[0]) {
            return None;
        }
    }
    if s.search() {
        Some(s.value[1..].iter().map(|&v| v > 0).collect())
    } else {
        None
    }
}

fn lit_index(l: i64) -> usize {
    let v = l.unsigned_abs() as usize;
    2 * v + usize::from(l < 0)
}

struct Dpll<'a> {
    clauses: &'a [Vec<i64>],
    occ: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<usize>,
}

impl Dpll<'_> {
    fn lit_value(&self, l: i64) -> i8 {
        let v = self.value[l.unsigned_abs() as usize];
        if l < 0 {
            -v
        } else {
            v
        }
    }

    fn set(&mut self, l: i64) {
        let v = l.unsigned_abs() as usize;
        self.value[v] = if l > 0 { 1 } else { -1 };
        self.trail.push(v);
    }

    fn enqueue_and_propagate(&mut self, l: i64) -> bool {
        match self.lit_value(l) {
            1 => return true,
            -1 => return false,
            _ => {}
        }
        self.set(l);
        let mut head = self.trail.len() - 1;
        while head < self.trail.len() {
            let v = self.trail[head];
            head += 1;
            let falsified = if self.value[v] > 0 {
                -(v as i64)
            } else {
                v as i64
            };
            for k in 0..self.occ[lit_index(falsified)].len() {
                let ci = self.occ[lit_index(falsified)][k];
                let mut unassigned = None;
                let mut free = 0;
                let mut sat = false;
                for &m in &self.clauses[ci] {
                    match self.lit_value(m) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            free += 1;
                            unassigned = Some(m);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match free {
                    0 => return false,
                    1 => self.set(unassigned.unwrap()),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.value[v] = 0;
        }
    }

    fn search(&mut self) -> bool {
        let Some(v) = (1..self.value.len()).find(|&v| self.value[v] == 0) else {
            return true;
        };
        for l in [v as i64, -(v as i64)] {
            let mark = self.trail.len();
            if self.enqueue_and_propagate(l) && self.search() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Monochromatic (a,b)-triple by scanning every `(x, d)` straight from the
/// definition. `colors[i-1]` is the color of `i`.
pub fn naive_mono_triple(a: usize, b: usize, colors: &[u8]) -> Option<(usize, usize, usize)> {
    let n = colors.len();
    for x in 1..=n {
        for d in 1..=n {
            let (y, z) = (a * x + d, b * x + 2 * d);
            if y > n || z > n {
                break;
            }
            if colors[x - 1] == colors[y - 1] && colors[y - 1] == colors[z - 1] {
                return Some((x, y, z));
            }
        }
    }
    None
}

/// Whether some 2-coloring of `[1, n]` avoids monochromatic triples, by
/// trying all `2^n` of them.
pub fn naive_exists_2col(a: usize, b: usize, n: usize) -> bool {
    (0u64..1 << n).any(|bits| {
        let colors: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
        naive_mono_triple(a, b, &colors).is_none()
    })
}

/// Number of valid 2-colorings of `[1, n]`, by exhaustion.
pub fn naive_count_2col(a: usize, b: usize, n: usize) -> usize {
    (0u64..1 << n)
        .filter(|bits| {
            let colors: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            naive_mono_triple(a, b, &colors).is_none()
        })
        .count()
}
