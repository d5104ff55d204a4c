//! Signed monomial basis of the tensor algebra `C ⊗ … ⊗ C ⊗ H`.
//!
//! The complex factors contribute commuting generators `e_1 … e_N`, each squaring to
//! `-1`. A monomial is a bitmask over these generators (bit `k-1` for `e_k`). Basis
//! element `m` (1-based) is the product `(e_N e_{N-1})^{b_N} ⋯ (e_2 e_1)^{b_2} (e_1)^{b_1}`
//! where `b_1 … b_N` are the bits of `m - 1`, least significant first.

/// Largest supported number of complex factors.
pub const MAX_FACTORS: usize = 24;

/// Sign and mask of `a · b` for two monomials.
pub fn monomial_product(a: (i8, u32), b: (i8, u32)) -> (i8, u32) {
    let swaps = (a.1 & b.1).count_ones();
    let sign = a.0 * b.0 * if swaps % 2 == 0 { 1 } else { -1 };
    (sign, a.1 ^ b.1)
}

/// Basis element `m` (1-based) of the `n`-factor algebra as a signed monomial.
pub fn basis_monomial(n: usize, m: usize) -> (i8, u32) {
    assert!(n <= MAX_FACTORS && m >= 1 && m <= 1 << n, "basis index {m} out of range");
    let bits = m - 1;
    let mut acc = (1i8, 0u32);
    for level in (1..=n).rev() {
        if bits >> (level - 1) & 1 == 1 {
            let mut factor = 1u32 << (level - 1);
            if level >= 2 {
                factor |= 1 << (level - 2);
            }
            acc = monomial_product(acc, (1, factor));
        }
    }
    acc
}

/// Index `m` (1-based) of the basis element carrying `mask`, together with its sign,
/// so that `monomial(mask) = sign · basis(m)`.
pub fn basis_index_of_mask(n: usize, mask: u32) -> (i8, usize) {
    let mut bits = 0usize;
    let mut upper = 0u32;
    for level in (1..=n).rev() {
        let b = (mask >> (level - 1) & 1) ^ upper;
        bits |= (b as usize) << (level - 1);
        upper = b;
    }
    let m = bits + 1;
    let (sign, found) = basis_monomial(n, m);
    debug_assert_eq!(found, mask);
    (sign, m)
}

/// `basis(a) · basis(b) = sign · basis(c)`; returns `(sign, c)`.
pub fn basis_product(n: usize, a: usize, b: usize) -> (i8, usize) {
    let (sa, ma) = basis_monomial(n, a);
    let (sb, mb) = basis_monomial(n, b);
    let (s, mask) = monomial_product((sa, ma), (sb, mb));
    let (sc, c) = basis_index_of_mask(n, mask);
    (s * sc, c)
}

/// The last complex generator `e_N` written in the basis: `e_N = sign · basis(m)`.
pub fn last_generator(n: usize) -> (i8, usize) {
    basis_index_of_mask(n, 1 << (n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_factor_basis() {
        assert_eq!(basis_monomial(2, 1), (1, 0b00));
        assert_eq!(basis_monomial(2, 2), (1, 0b01));
        assert_eq!(basis_monomial(2, 3), (1, 0b11));
        assert_eq!(basis_monomial(2, 4), (-1, 0b10));
    }

    #[test]
    fn products() {
        assert_eq!(basis_product(1, 2, 2), (-1, 1));
        assert_eq!(basis_product(2, 2, 3), (1, 4));
        assert_eq!(basis_product(2, 1, 3), (1, 3));
    }

    #[test]
    fn mask_lookup_inverts_basis() {
        for n in 1..=6 {
            for m in 1..=(1 << n) {
                let (s, mask) = basis_monomial(n, m);
                let (s2, m2) = basis_index_of_mask(n, mask);
                assert_eq!((s2, m2), (s, m));
            }
        }
    }

    #[test]
    fn last_generator_sign() {
        assert_eq!(last_generator(1), (1, 2));
        assert_eq!(last_generator(2), (-1, 4));
        assert_eq!(last_generator(3), (1, 8));
    }
}
