use super::{sigma, Conjugation, Flow, InvolutiveStateMap};

/// Scovel projection `ψ̃_h = φ_{h/2} ∘ σ(φ⁻¹)_{h/2}`.
///
/// `σ(ψ̃) = ψ̃⁻¹` holds as an algebraic identity, so the conjugating map
/// becomes an exact reversing symmetry (for time reversal: the method
/// becomes self-adjoint).
pub fn scovel(flow: &Flow, conj: &Conjugation) -> Flow {
    let s_inv = sigma(&flow.inverse(), conj);
    let mut out = Flow::compose(
        format!("scovel({})", flow.name()),
        flow.declared_order(),
        vec![(s_inv, 0.5), (flow.clone(), 0.5)],
    );
    // two half steps advance one base step
    out.period = flow.period;
    out
}

/// Thue–Morse word of level `k` in product notation (`0` = `φ`,
/// `1` = `σ(φ)`): `0`, `01`, `0110`, `01101001`, …; the conjugate sequence
/// swaps the letters.
pub fn thue_morse_pattern(k: u32, conjugate: bool) -> String {
    (0..1usize << k)
        .map(|i| {
            let bit = (i.count_ones() % 2 == 1) ^ conjugate;
            if bit {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Level-`k` Thue–Morse composition `φ^{[j+1]} = φ^{[j]} ∘ σ(φ^{[j]})`
/// (starting from `σ(φ)` when `conjugate` is set). One macro-step applies
/// the base flow `2^k` times at step `h`.
pub fn thue_morse(flow: &Flow, t: &InvolutiveStateMap, k: u32, conjugate: bool) -> Flow {
    let conj = Conjugation::State(t.clone());
    let mut cur = if conjugate {
        sigma(flow, &conj)
    } else {
        flow.clone()
    };
    for level in 1..=k {
        let s = sigma(&cur, &conj);
        // product φ∘σ(φ): σ(φ) acts first
        cur = Flow::compose(
            format!("tm{level}({})", flow.name()),
            flow.declared_order(),
            vec![(s, 1.0), (cur, 1.0)],
        );
    }
    cur
}

/// Triple-jump coefficients `α = 1/(2 − 2^{1/(2p+1)})`, `β = 1 − 2α`.
pub fn yoshida_coefficients(p: u32) -> (f64, f64) {
    let c = 2f64.powf(1.0 / (2 * p + 1) as f64);
    let a = 1.0 / (2.0 - c);
    (a, 1.0 - 2.0 * a)
}

/// `φ_{αh} ∘ φ_{βh} ∘ φ_{αh}`: raises a self-adjoint order-`2p` method to
/// order `2p + 2`.
pub fn yoshida(flow: &Flow, p: u32) -> Flow {
    let (a, b) = yoshida_coefficients(p);
    let mut out = Flow::compose(
        format!("yoshida{p}({})", flow.name()),
        2 * p + 2,
        vec![(flow.clone(), a), (flow.clone(), b), (flow.clone(), a)],
    );
    out.period = flow.period;
    out.word = None;
    out
}

/// Positive coefficients `a = 1/(2 + 2^{1/(2p+1)})`, `b = 1 − 2a`, solving
/// `2a + b = 1`, `2a^{2p+1} = b^{2p+1}`.
pub fn symmetrize_coefficients(p: u32) -> (f64, f64) {
    let c = 2f64.powf(1.0 / (2 * p + 1) as f64);
    let a = 1.0 / (2.0 + c);
    (a, 1.0 - 2.0 * a)
}

/// `φ^{[1]}_h = φ_{ah} ∘ σ(φ_{bh}) ∘ φ_{ah}`, iterated `iterations` times
/// with `p` raised by one per level. The symmetry error becomes
/// `O(h^{2(p+k)+1})` per step while the global order stays `2p`; every
/// substep is positive.
pub fn symmetrize_selfadjoint(
    flow: &Flow,
    t: &InvolutiveStateMap,
    p: u32,
    iterations: u32,
) -> Flow {
    let conj = Conjugation::State(t.clone());
    let mut cur = flow.clone();
    for level in 0..iterations {
        let (a, b) = symmetrize_coefficients(p + level);
        let s = sigma(&cur, &conj);
        let mut next = Flow::compose(
            format!("selfadjoint{}({})", level + 1, flow.name()),
            flow.declared_order(),
            vec![(cur.clone(), a), (s, b), (cur.clone(), a)],
        );
        next.period = flow.period;
        next.word = None;
        cur = next;
    }
    cur
}
