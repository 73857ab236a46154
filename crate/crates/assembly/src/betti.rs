use graded_core::PrimeContext;

/// `b(d) = ⌈log_p(⌈(d+1)/(p−1)⌉ + 1)⌉ + 2`, computed in exact integer
/// arithmetic.
pub fn betti_bound(ctx: &PrimeContext, d: u64) -> u32 {
    let p = ctx.p() as u64;
    let x = (d + 1).div_ceil(p - 1) + 1;
    // ⌈log_p x⌉: the least e with pᵉ ≥ x.
    let mut e = 0;
    let mut pe = 1u64;
    while pe < x {
        pe = pe.saturating_mul(p);
        e += 1;
    }
    e + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c3 = PrimeContext::new(3).unwrap();
        assert_eq!(betti_bound(&c3, 3), 3);
        assert_eq!(betti_bound(&c3, 0), 3);
        assert_eq!(betti_bound(&PrimeContext::new(2).unwrap(), 1), 4);
        // p = 3: ⌈(d+1)/2⌉ + 1 first exceeds 3 at d = 4.
        assert_eq!(betti_bound(&c3, 4), 4);
    }
}
