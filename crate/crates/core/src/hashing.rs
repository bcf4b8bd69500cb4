//! A 2^{-l}-universal hash family on variable-length bit strings.
//!
//! The family is Toeplitz-over-GF(2): a seed of `padded_len + l - 1` bits
//! defines the matrix `T[j][k] = seed[j + k]`, and hashing multiplies the
//! padded input by `T`. Variable-length inputs are made fixed-length by an
//! injective pad: the data bits, zero-fill up to `max_input_len`, then the
//! input length in a fixed-width binary field. Any two distinct inputs give
//! distinct pads, so they collide with probability exactly `2^-l` over the
//! seed.
//!
//! The empty input pads to the all-zero vector and therefore hashes to the
//! all-zero output under every seed; universality over the full domain is
//! unaffected because no other input shares that pad.

use rand::Rng;

use crate::bits::BitString;
use crate::error::HashError;

/// Hard cap on output length.
pub const MAX_OUTPUT_BITS: usize = 64;
/// Enumerating a family is allowed up to this many seed bits.
pub const ENUMERATION_CAP_BITS: usize = 24;

/// Width of the length field: enough bits to write any value in
/// `0..=max_input_len`.
pub fn length_field_bits(max_input_len: usize) -> usize {
    usize::BITS as usize - max_input_len.leading_zeros() as usize
}

/// Padded input width: data field plus length field.
pub fn padded_len(max_input_len: usize) -> usize {
    max_input_len + length_field_bits(max_input_len)
}

/// Seed width for the family with the given parameters.
pub fn seed_len(max_input_len: usize, out_len: usize) -> usize {
    padded_len(max_input_len) + out_len - 1
}

/// A serializable member of the hash family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashDescriptor {
    max_input_len: usize,
    out_len: usize,
    seed: BitString,
}

impl HashDescriptor {
    pub fn new(
        max_input_len: usize,
        out_len: usize,
        seed: BitString,
    ) -> Result<Self, HashError> {
        check_params(max_input_len, out_len)?;
        let expected = seed_len(max_input_len, out_len);
        if seed.len() != expected {
            return Err(HashError::BadSeedLength {
                expected,
                actual: seed.len(),
            });
        }
        Ok(Self {
            max_input_len,
            out_len,
            seed,
        })
    }

    /// Samples a uniform member of the family.
    pub fn sample<R: Rng + ?Sized>(
        max_input_len: usize,
        out_len: usize,
        rng: &mut R,
    ) -> Result<Self, HashError> {
        check_params(max_input_len, out_len)?;
        let seed = BitString::random(seed_len(max_input_len, out_len), rng);
        Ok(Self {
            max_input_len,
            out_len,
            seed,
        })
    }

    pub fn max_input_len(&self) -> usize {
        self.max_input_len
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn seed(&self) -> &BitString {
        &self.seed
    }

    /// Injective padding: data, zero-fill, then the length field.
    pub fn pad(&self, x: &BitString) -> Result<BitString, HashError> {
        if x.len() > self.max_input_len {
            return Err(HashError::InputTooLong {
                max: self.max_input_len,
                actual: x.len(),
            });
        }
        let mut padded = x.clone();
        for _ in x.len()..self.max_input_len {
            padded.push(false);
        }
        let field = length_field_bits(self.max_input_len);
        for i in 0..field {
            padded.push((x.len() >> (field - 1 - i)) & 1 == 1);
        }
        Ok(padded)
    }

    /// Hashes an input of at most `max_input_len` bits to `out_len` bits.
    pub fn eval(&self, x: &BitString) -> Result<BitString, HashError> {
        Ok(self.eval_padded(&self.pad(x)?))
    }

    /// The raw GF(2) Toeplitz multiply on an already padded vector.
    /// Linear: `eval_padded(u ^ v) == eval_padded(u) ^ eval_padded(v)`.
    pub fn eval_padded(&self, padded: &BitString) -> BitString {
        debug_assert_eq!(padded.len(), padded_len(self.max_input_len));
        (0..self.out_len)
            .map(|j| {
                let mut bit = false;
                for (k, u) in padded.iter().enumerate() {
                    bit ^= u && self.seed[j + k];
                }
                bit
            })
            .collect()
    }

    /// Wire encoding: max_input_len and out_len as big-endian u16, then the
    /// seed bits packed most-significant-bit first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.seed.len().div_ceil(8));
        out.extend_from_slice(&(self.max_input_len as u16).to_be_bytes());
        out.extend_from_slice(&(self.out_len as u16).to_be_bytes());
        out.extend_from_slice(&self.seed.pack_msb_first());
        out
    }

    /// Number of wire bytes for the given parameters.
    pub fn encoded_len(max_input_len: usize, out_len: usize) -> usize {
        4 + seed_len(max_input_len, out_len).div_ceil(8)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, HashError> {
        if bytes.len() < 4 {
            return Err(HashError::MalformedDescription("truncated header".into()));
        }
        let max_input_len = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let out_len = u16::from_be_bytes([bytes[2], bytes[3]]) as usize;
        check_params(max_input_len, out_len)?;
        let bits = seed_len(max_input_len, out_len);
        let body = &bytes[4..];
        if body.len() != bits.div_ceil(8) {
            return Err(HashError::MalformedDescription(format!(
                "seed body has {} bytes, expected {}",
                body.len(),
                bits.div_ceil(8)
            )));
        }
        // Trailing pad bits must be zero so encodings are canonical.
        let seed = BitString::unpack_msb_first(body, bits)
            .ok_or_else(|| HashError::MalformedDescription("seed unpack failed".into()))?;
        if seed.pack_msb_first() != body {
            return Err(HashError::MalformedDescription(
                "non-canonical seed padding bits".into(),
            ));
        }
        Self::new(max_input_len, out_len, seed)
    }
}

fn check_params(max_input_len: usize, out_len: usize) -> Result<(), HashError> {
    if max_input_len == 0 {
        return Err(HashError::ZeroInputLength);
    }
    if out_len == 0 || out_len > MAX_OUTPUT_BITS {
        return Err(HashError::BadOutputLength {
            max: MAX_OUTPUT_BITS,
            actual: out_len,
        });
    }
    Ok(())
}

/// Exact collision probability of two inputs over the whole family, by full
/// seed enumeration. Returns (colliding seeds, total seeds).
pub fn collision_probability_exact(
    max_input_len: usize,
    out_len: usize,
    x: &BitString,
    y: &BitString,
) -> Result<(u64, u64), HashError> {
    check_params(max_input_len, out_len)?;
    let bits = seed_len(max_input_len, out_len);
    if bits > ENUMERATION_CAP_BITS {
        return Err(HashError::FamilyTooLarge {
            seed_bits: bits,
            cap: ENUMERATION_CAP_BITS,
        });
    }
    if x.len() > max_input_len || y.len() > max_input_len {
        return Err(HashError::InputTooLong {
            max: max_input_len,
            actual: x.len().max(y.len()),
        });
    }
    let total = 1u64 << bits;
    let mut colliding = 0u64;
    for raw in 0..total {
        let h = HashDescriptor::new(
            max_input_len,
            out_len,
            BitString::from_index(raw as usize, bits),
        )?;
        if h.eval(x)? == h.eval(y)? {
            colliding += 1;
        }
    }
    Ok((colliding, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::all_bitstrings;
    use crate::rng;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn seed_lengths_match_the_padding_formula() {
        // max 4: data 4 + length field 3 = 7; 7 + 2 - 1 = 8.
        assert_eq!(seed_len(4, 2), 8);
        // max 1: data 1 + length field 1 = 2; 2 + 1 - 1 = 2.
        assert_eq!(seed_len(1, 1), 2);
        assert_eq!(padded_len(3), 5);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = HashDescriptor::sample(4, 2, &mut rng::seeded(9)).unwrap();
        let b = HashDescriptor::sample(4, 2, &mut rng::seeded(9)).unwrap();
        assert_eq!(a, b);
        let c = HashDescriptor::sample(4, 2, &mut rng::seeded(10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_lengths_rejected() {
        assert!(matches!(
            HashDescriptor::sample(0, 1, &mut rng::seeded(1)),
            Err(HashError::ZeroInputLength)
        ));
        assert!(matches!(
            HashDescriptor::sample(1, 0, &mut rng::seeded(1)),
            Err(HashError::BadOutputLength { .. })
        ));
        assert!(HashDescriptor::sample(4, 65, &mut rng::seeded(1)).is_err());
    }

    #[test]
    fn zero_seed_hashes_everything_to_zero() {
        let h = HashDescriptor::new(4, 2, BitString::zeros(8)).unwrap();
        for x in ["", "1", "10", "1111"] {
            assert_eq!(h.eval(&bs(x)).unwrap(), BitString::zeros(2));
        }
    }

    #[test]
    fn worked_toeplitz_example() {
        // max 4, l 2, seed 10110010: pad(101) = 101 | 0 | 011 = 1010011.
        let h = HashDescriptor::new(4, 2, bs("10110010")).unwrap();
        assert_eq!(h.pad(&bs("101")).unwrap(), bs("1010011"));
        let got = h.eval(&bs("101")).unwrap();

        // Independent route: build the full matrix T[j][k] = seed[j + k] and
        // multiply the padded vector explicitly.
        let seed = bs("10110010");
        let u = h.pad(&bs("101")).unwrap();
        let mut expect = BitString::new();
        for j in 0..2 {
            let mut acc = false;
            for k in 0..u.len() {
                acc ^= seed[j + k] && u[k];
            }
            expect.push(acc);
        }
        assert_eq!(got, expect);
        assert_eq!(got, bs("10"));
    }

    #[test]
    fn padding_is_injective_over_the_variable_length_domain() {
        let h = HashDescriptor::sample(3, 1, &mut rng::seeded(1)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for len in 0..=3usize {
            for x in all_bitstrings(len) {
                assert!(seen.insert(h.pad(&x).unwrap()), "pad collision at {x}");
            }
        }
        // In particular the empty input and "0" pad differently.
        assert_ne!(h.pad(&bs("")).unwrap(), h.pad(&bs("0")).unwrap());
    }

    #[test]
    fn input_too_long_rejected() {
        let h = HashDescriptor::sample(3, 1, &mut rng::seeded(1)).unwrap();
        assert!(matches!(
            h.eval(&bs("0101")),
            Err(HashError::InputTooLong { .. })
        ));
    }

    #[test]
    fn universality_is_exact_by_enumeration() {
        // Every distinct pair over {0,1}^{<=3} collides on exactly 1/4 of the
        // family for l = 2.
        let mut inputs = Vec::new();
        for len in 0..=3usize {
            inputs.extend(all_bitstrings(len));
        }
        for (i, x) in inputs.iter().enumerate() {
            for y in &inputs[i + 1..] {
                let (c, t) = collision_probability_exact(3, 2, x, y).unwrap();
                assert_eq!(c * 4, t, "pair {x} / {y}: {c}/{t}");
            }
        }
    }

    #[test]
    fn collision_examples() {
        // max 2 gives a 4-bit seed family of 16 members.
        let (c, t) = collision_probability_exact(2, 1, &bs("0"), &bs("1")).unwrap();
        assert_eq!((c * 2, t), (t, 16));
        // Identical inputs collide with probability 1.
        let (c, t) = collision_probability_exact(3, 2, &bs("01"), &bs("01")).unwrap();
        assert_eq!(c, t);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let x = bs("0");
        assert!(matches!(
            collision_probability_exact(40, 8, &x, &bs("1")),
            Err(HashError::FamilyTooLarge { .. })
        ));
    }

    #[test]
    fn wire_encoding_is_pinned() {
        let h = HashDescriptor::new(4, 2, bs("10110010")).unwrap();
        assert_eq!(h.to_bytes(), vec![0x00, 0x04, 0x00, 0x02, 0xB2]);
        assert_eq!(HashDescriptor::from_bytes(&h.to_bytes()).unwrap(), h);
        assert_eq!(HashDescriptor::encoded_len(4, 2), 5);
        // Non-canonical trailing bits are rejected: (1, 1) has a 2-bit seed,
        // so the low six bits of the final byte must be zero.
        assert!(HashDescriptor::from_bytes(&[0x00, 0x01, 0x00, 0x01, 0xC0]).is_ok());
        assert!(HashDescriptor::from_bytes(&[0x00, 0x01, 0x00, 0x01, 0xC1]).is_err());
    }

    proptest! {
        #[test]
        fn gf2_linearity_at_the_padded_level(
            seed_raw in any::<u64>(),
            u_raw in any::<u64>(),
            v_raw in any::<u64>(),
        ) {
            let h = HashDescriptor::new(
                5, 3, BitString::from_index(seed_raw as usize % (1 << 10), 10)
            ).unwrap();
            let m = padded_len(5);
            let u = BitString::from_index(u_raw as usize % (1 << m), m);
            let v = BitString::from_index(v_raw as usize % (1 << m), m);
            let lhs = h.eval_padded(&u.xor(&v));
            let rhs = h.eval_padded(&u).xor(&h.eval_padded(&v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn wire_roundtrip(max in 1usize..12, ell in 1usize..8, raw in any::<u64>()) {
            let bits = seed_len(max, ell);
            let seed = BitString::from_index(raw as usize % (1usize << bits.min(60)), bits);
            let h = HashDescriptor::new(max, ell, seed).unwrap();
            prop_assert_eq!(HashDescriptor::from_bytes(&h.to_bytes()).unwrap(), h);
        }
    }
}
