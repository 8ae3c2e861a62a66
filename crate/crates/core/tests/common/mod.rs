#![allow(dead_code)]

use stratnet::builder::*;
use stratnet::generate::{random_net, GenParams};
use stratnet::Formula;
use stratnet::Net;

pub fn a() -> Formula {
    Formula::atom("A")
}

pub fn x() -> Formula {
    Formula::atom("X")
}

/// `?A⊥, §A`: a dereliction whose other side goes through a paragraph.
pub fn shift_left() -> Net {
    let n = flat_rule(&ax(a()), 0).unwrap();
    let n = whynot_rule(&n, &[0], &a().dual()).unwrap();
    paragraph_rule(&n, 1).unwrap()
}

/// The same net with a paragraph above the flat link.
pub fn shift_right() -> Net {
    let n = paragraph_rule(&ax(a()), 0).unwrap();
    let n = paragraph_rule(&n, 1).unwrap();
    let n = flat_rule(&n, 0).unwrap();
    whynot_rule(&n, &[0], &Formula::paragraph(a().dual())).unwrap()
}

/// `?A⊥ ⅋ !A`, built with a cut between `!!A ⊗ ?A⊥` and a dereliction.
pub fn not_l3_left() -> Net {
    let d = flat_rule(&ax(a()), 0).unwrap();
    let d = promotion(&d, 1).unwrap();
    let d = promotion(&d, 1).unwrap();
    let d = whynot_rule(&d, &[0], &a().dual()).unwrap();
    let ax3 = ax(Formula::why_not(a().dual()));
    let tens = tensor_rule(&d, 1, &ax3, 1).unwrap();
    let r = dereliction(Formula::of_course(a()));
    par_rule(&cut_rule(&tens, 1, &r, 0).unwrap(), 0, 1).unwrap()
}

/// Cut-free form of [`not_l3_left`].
pub fn not_l3_right() -> Net {
    let n = flat_rule(&ax(a()), 0).unwrap();
    let n = promotion(&n, 1).unwrap();
    let n = whynot_rule(&n, &[0], &a().dual()).unwrap();
    par_rule(&n, 0, 1).unwrap()
}

/// `§X ⊸ X`.
pub fn paragraph_elim() -> Net {
    par_rule(&paragraph_rule(&ax(x()), 0).unwrap(), 0, 1).unwrap()
}

/// `X ⊸ §X`.
pub fn paragraph_intro() -> Net {
    par_rule(&paragraph_rule(&ax(x()), 1).unwrap(), 0, 1).unwrap()
}

/// Parameters cycling through a range of biases.
pub fn mixed_params(seed: u64, max_size: usize, cut_bias: f64) -> GenParams {
    GenParams {
        size: 2 + ((seed % 1009) as usize * 7) % (max_size - 1),
        box_bias: 0.1 + 0.1 * (seed % 4) as f64,
        paragraph_bias: 0.1 * (seed % 4) as f64,
        exponential_bias: 0.1 + 0.1 * (seed % 5) as f64,
        cut_bias,
    }
}

/// Cut-free nets of at most `max_links` links.
pub fn cut_free_corpus(count: usize, max_links: usize) -> Vec<Net> {
    (0u64..)
        .map(|s| random_net(s, &mixed_params(s, 18, 0.0)))
        .filter(|n| n.num_links() <= max_links)
        .take(count)
        .collect()
}

/// Nets with at least one cut.
pub fn cut_corpus(count: usize, max_links: usize) -> Vec<Net> {
    (0u64..)
        .map(|s| random_net(s, &mixed_params(s, 30, 0.3 + 0.1 * (s % 4) as f64)))
        .filter(|n| n.has_cuts() && n.num_links() <= max_links)
        .take(count)
        .collect()
}
