//! Synthetic benchmark generators.

use crate::netlist::{Netlist, Signal};

/// Ripple-carry adder with carry-in. Bit `i` computes `x = a ^ b`,
/// `s = x ^ c` and `carry = (a & b) | (x & c)`, so every bit holds one
/// XOR3 cone and one MAJ3 cone over the same three leaves.
pub fn gen_ripple_adder(bits: usize) -> Netlist {
    assert!((1..=256).contains(&bits), "adder width must be in 1..=256");
    let mut net = Netlist::new();
    let a: Vec<Signal> = (0..bits).map(|i| net.add_pi(format!("a{i}"))).collect();
    let b: Vec<Signal> = (0..bits).map(|i| net.add_pi(format!("b{i}"))).collect();
    let mut c = net.add_pi("cin");
    for i in 0..bits {
        let x = net.xor2(a[i], b[i]);
        let s = net.xor2(x, c);
        let g = net.and2(a[i], b[i]);
        let p = net.and2(x, c);
        c = net.or2(g, p);
        net.add_po(s, format!("s{i}")).expect("fresh signal");
    }
    net.add_po(c, "cout").expect("fresh signal");
    net
}

/// Array multiplier built from AND partial products and ripple adders,
/// `bits x bits -> 2 * bits`.
pub fn gen_array_multiplier(bits: usize) -> Netlist {
    assert!((2..=32).contains(&bits), "multiplier width must be in 2..=32");
    let mut net = Netlist::new();
    let a: Vec<Signal> = (0..bits).map(|i| net.add_pi(format!("a{i}"))).collect();
    let b: Vec<Signal> = (0..bits).map(|i| net.add_pi(format!("b{i}"))).collect();
    // acc[k] holds the running sum bit of weight k, None while empty
    let mut acc: Vec<Option<Signal>> = vec![None; 2 * bits];
    for (j, &bj) in b.iter().enumerate() {
        let mut carry: Option<Signal> = None;
        for (i, &ai) in a.iter().enumerate() {
            let pp = net.and2(ai, bj);
            let k = i + j;
            let (s, c) = match (acc[k], carry) {
                (None, None) => (pp, None),
                (Some(x), None) | (None, Some(x)) => {
                    let s = net.xor2(x, pp);
                    let c = net.and2(x, pp);
                    (s, Some(c))
                }
                (Some(x), Some(y)) => {
                    let t = net.xor2(x, pp);
                    let s = net.xor2(t, y);
                    let g = net.and2(x, pp);
                    let p = net.and2(t, y);
                    (s, Some(net.or2(g, p)))
                }
            };
            acc[k] = Some(s);
            carry = c;
        }
        let mut k = j + bits;
        while let Some(c) = carry.take() {
            match acc[k] {
                None => acc[k] = Some(c),
                Some(x) => {
                    acc[k] = Some(net.xor2(x, c));
                    carry = Some(net.and2(x, c));
                    k += 1;
                }
            }
        }
    }
    for (k, s) in acc.into_iter().enumerate() {
        let s = s.expect("every product bit is driven");
        net.add_po(s, format!("p{k}")).expect("fresh signal");
    }
    net
}
