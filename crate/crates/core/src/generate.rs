//! Seeded random generation of sequentializable nets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builder::*;
use crate::formula::Formula;
use crate::net::Net;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    /// Rough number of rule applications.
    pub size: usize,
    pub box_bias: f64,
    pub paragraph_bias: f64,
    pub exponential_bias: f64,
    pub cut_bias: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { size: 12, box_bias: 0.2, paragraph_bias: 0.2, exponential_bias: 0.2, cut_bias: 0.0 }
    }
}

/// A random net built from the sequent rules only, hence sequentializable.
/// Deterministic in `seed`; with `cut_bias == 0` the result is cut-free.
pub fn random_net(seed: u64, params: &GenParams) -> Net {
    if params.size == 0 {
        return daimon();
    }
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), p: *params };
    let n = g.net(params.size);
    g.close_flats(n)
}

/// A random formula of depth at most `depth` over the atoms `A`, `B`, `C`.
/// Modalities appear only when the matching bias is positive.
pub fn random_formula(seed: u64, depth: usize, params: &GenParams) -> Formula {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), p: *params };
    g.formula(depth)
}

#[derive(Clone, Copy)]
enum Rule {
    Tensor,
    Par,
    Bottom,
    Paragraph,
    Flat,
    Weakening,
    Promotion,
    Cut,
    Mix,
}

struct Gen {
    rng: ChaCha8Rng,
    p: GenParams,
}

impl Gen {
    fn formula(&mut self, depth: usize) -> Formula {
        let atoms = ["A", "B", "C"];
        let atom = |g: &mut Gen| {
            let name = *atoms.choose(&mut g.rng).unwrap();
            if g.rng.gen_bool(0.5) {
                Formula::atom(name)
            } else {
                Formula::dual_atom(name)
            }
        };
        if depth == 0 || self.rng.gen_bool(0.6) {
            return atom(self);
        }
        let mut choices = vec![0, 1];
        if self.p.paragraph_bias > 0.0 {
            choices.push(2);
        }
        if self.p.exponential_bias > 0.0 {
            choices.extend([3, 4]);
        }
        match *choices.choose(&mut self.rng).unwrap() {
            0 => Formula::tensor(self.formula(depth - 1), self.formula(depth - 1)),
            1 => Formula::par(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::paragraph(self.formula(depth - 1)),
            3 => Formula::of_course(self.formula(depth - 1)),
            _ => Formula::why_not(self.formula(depth - 1)),
        }
    }

    fn leaf(&mut self) -> Net {
        if self.rng.gen_bool(0.1) {
            one_rule()
        } else {
            let f = self.formula(1);
            ax(f)
        }
    }

    fn plain_indices(n: &Net) -> Vec<usize> {
        (0..n.conclusions().len()).filter(|&i| !n.label(n.conclusions()[i]).is_flat()).collect()
    }

    fn pick_plain(&mut self, n: &Net) -> Option<usize> {
        Self::plain_indices(n).choose(&mut self.rng).copied()
    }

    fn net(&mut self, budget: usize) -> Net {
        if budget <= 1 {
            return self.leaf();
        }
        let p = self.p;
        let weighted = [
            (Rule::Tensor, 1.0),
            (Rule::Par, 1.0),
            (Rule::Mix, 0.3),
            (Rule::Bottom, 0.1),
            (Rule::Paragraph, p.paragraph_bias),
            (Rule::Flat, p.exponential_bias),
            (Rule::Weakening, p.exponential_bias * 0.3),
            (Rule::Promotion, p.box_bias),
            (Rule::Cut, p.cut_bias),
        ];
        let rule = weighted
            .choose_weighted(&mut self.rng, |(_, w)| w.max(0.0))
            .map(|(r, _)| *r)
            .unwrap_or(Rule::Mix);
        match rule {
            Rule::Tensor => {
                let k = self.rng.gen_range(1..budget);
                let a = self.net(k);
                let b = self.net(budget - k);
                match (self.pick_plain(&a), self.pick_plain(&b)) {
                    (Some(i), Some(j)) => tensor_rule(&a, i, &b, j).unwrap(),
                    _ => mix(&a, &b),
                }
            }
            Rule::Mix => {
                let k = self.rng.gen_range(1..budget);
                let a = self.net(k);
                let b = self.net(budget - k);
                mix(&a, &b)
            }
            Rule::Par => {
                let a = self.net(budget - 1);
                let mut idx = Self::plain_indices(&a);
                idx.shuffle(&mut self.rng);
                match idx[..] {
                    [i, j, ..] => par_rule(&a, i, j).unwrap(),
                    _ => a,
                }
            }
            Rule::Bottom => bottom_rule(&self.net(budget - 1)),
            Rule::Paragraph => {
                let a = self.net(budget - 1);
                match self.pick_plain(&a) {
                    Some(i) => paragraph_rule(&a, i).unwrap(),
                    None => a,
                }
            }
            Rule::Flat => {
                let a = self.net(budget - 1);
                match self.pick_plain(&a) {
                    Some(i) => self.flat_and_maybe_contract(a, i),
                    None => a,
                }
            }
            Rule::Weakening => {
                let a = self.net(budget - 1);
                let f = self.formula(1);
                whynot_rule(&a, &[], &f).unwrap()
            }
            Rule::Promotion => {
                let a = self.net(budget - 1);
                self.promote(a)
            }
            Rule::Cut => {
                let k = self.rng.gen_range(1..budget);
                let a = self.net(k);
                let Some(i) = self.pick_plain(&a) else { return a };
                let f = a.label(a.conclusions()[i]).formula().dual();
                let (b, j) = self.with_conclusion(&f, budget - k);
                cut_rule(&a, i, &b, j).unwrap()
            }
        }
    }

    /// Flattens conclusion `i`; sometimes also flattens another conclusion
    /// with the same formula and contracts both under one why-not.
    fn flat_and_maybe_contract(&mut self, a: Net, i: usize) -> Net {
        let f = a.label(a.conclusions()[i]).formula().clone();
        let n = flat_rule(&a, i).unwrap();
        let twin = Self::plain_indices(&n)
            .into_iter()
            .find(|&j| n.label(n.conclusions()[j]).formula() == &f);
        match twin {
            Some(j) if self.rng.gen_bool(0.5) => {
                let n = flat_rule(&n, j).unwrap();
                whynot_rule(&n, &[i, j], &f).unwrap()
            }
            _ if self.rng.gen_bool(0.5) => whynot_rule(&n, &[i], &f).unwrap(),
            _ => n,
        }
    }

    /// Flattens every plain conclusion but one and promotes.
    fn promote(&mut self, a: Net) -> Net {
        let Some(principal) = self.pick_plain(&a) else { return a };
        let mut n = a;
        for i in Self::plain_indices(&n) {
            if i != principal {
                n = flat_rule(&n, i).unwrap();
            }
        }
        promotion(&n, principal).unwrap()
    }

    /// A net with a conclusion labelled `f`, and its position.
    fn with_conclusion(&mut self, f: &Formula, budget: usize) -> (Net, usize) {
        if budget <= 1 || self.rng.gen_bool(0.3) {
            return (ax(f.clone()), 1);
        }
        match f {
            Formula::Tensor(a, b) => {
                let (na, i) = self.with_conclusion(a, budget / 2);
                let (nb, j) = self.with_conclusion(b, budget - budget / 2);
                (tensor_rule(&na, i, &nb, j).unwrap(), i)
            }
            Formula::Par(a, b) => {
                let (na, i) = self.with_conclusion(a, budget / 2);
                let (nb, j) = self.with_conclusion(b, budget - budget / 2);
                let m = mix(&na, &nb);
                let j = na.conclusions().len() + j;
                (par_rule(&m, i, j).unwrap(), i.min(j))
            }
            Formula::Paragraph(a) => {
                let (n, i) = self.with_conclusion(a, budget - 1);
                (paragraph_rule(&n, i).unwrap(), i)
            }
            Formula::WhyNot(a) if self.rng.gen_bool(0.3) => {
                let n = self.net(budget - 1);
                let len = n.conclusions().len();
                (whynot_rule(&n, &[], a).unwrap(), len)
            }
            Formula::WhyNot(a) => {
                let (n, i) = self.with_conclusion(a, budget - 1);
                let n = flat_rule(&n, i).unwrap();
                (whynot_rule(&n, &[i], a).unwrap(), i)
            }
            Formula::OfCourse(body) => {
                let (mut n, i) = self.with_conclusion(body, budget - 1);
                for k in Self::plain_indices(&n) {
                    if k != i {
                        n = flat_rule(&n, k).unwrap();
                    }
                }
                (promotion(&n, i).unwrap(), i)
            }
            Formula::One => (one_rule(), 0),
            Formula::Bottom => {
                let n = self.net(budget - 1);
                let len = n.conclusions().len();
                (bottom_rule(&n), len)
            }
            _ => (ax(f.clone()), 1),
        }
    }

    /// Puts a why-not under every flat conclusion, contracting equal ones
    /// at random.
    fn close_flats(&mut self, mut n: Net) -> Net {
        loop {
            let flats: Vec<usize> =
                (0..n.conclusions().len()).filter(|&i| n.label(n.conclusions()[i]).is_flat()).collect();
            let Some(&i) = flats.first() else { return n };
            let f = n.label(n.conclusions()[i]).formula().clone();
            let mut group = vec![i];
            for &j in &flats[1..] {
                if n.label(n.conclusions()[j]).formula() == &f && self.rng.gen_bool(0.5) {
                    group.push(j);
                }
            }
            n = whynot_rule(&n, &group, &f).unwrap();
        }
    }
}
