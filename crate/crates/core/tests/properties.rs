//! Property tests: algebraic laws for the field layer, roundtrip and
//! linearity invariants for the premix code, and packing/pipeline
//! inverses.

use proptest::prelude::*;

use huncc_core::analysis::{sweep, SweepTable};
use huncc_core::cryptosys::{find_builtin_preset, Encryptor, IdentityCipher};
use huncc_core::galois::{FieldSpec, Matrix};
use huncc_core::hybrid::{
    huncc_decode, huncc_encode, pack_symbols_to_bits, unpack_bits_to_symbols, DecryptKeys,
    EncryptKeys, HunccConfig,
};
use huncc_core::iscode::{IsCode, MessageBlock};

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::auto(2, 4).unwrap()),
        Just(FieldSpec::auto(2, 8).unwrap()),
        Just(FieldSpec::auto(3, 2).unwrap()),
        Just(FieldSpec::auto(7, 1).unwrap()),
        Just(FieldSpec::auto(5, 2).unwrap()),
    ]
}

proptest! {
    #[test]
    fn field_axioms_hold((field, seeds) in arb_field().prop_flat_map(|f| {
        let order = f.order();
        (Just(f), prop::collection::vec(0..order, 3))
    })) {
        let a = field.element(seeds[0]).unwrap();
        let b = field.element(seeds[1]).unwrap();
        let c = field.element(seeds[2]).unwrap();
        // associativity
        prop_assert_eq!(
            a.try_add(&b).unwrap().try_add(&c).unwrap(),
            a.try_add(&b.try_add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
            a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
        );
        // commutativity
        prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        // distributivity
        prop_assert_eq!(
            a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
            a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
        );
        // inverses
        if !a.is_zero() {
            prop_assert_eq!(a.inv().unwrap().try_mul(&a).unwrap(), field.one());
        }
    }

    #[test]
    fn premix_roundtrips_and_is_linear(
        (l, cols, seed, codes) in (2usize..=5, 1usize..=4, any::<u8>(), any::<u64>()).prop_flat_map(
            |(l, cols, seed, key)| {
                let field = FieldSpec::auto(2, 8).unwrap();
                let order = field.order();
                let mut gen = key;
                let mut next = move || {
                    gen = gen.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    gen % order
                };
                let data: Vec<u64> = (0..2 * l * cols).map(|_| next()).collect();
                (Just(l), Just(cols), Just(seed), Just(data))
            }
        )
    ) {
        let field = FieldSpec::auto(2, 8).unwrap();
        let code = IsCode::build(&field, l, l - 1, [seed; 32]).unwrap();
        let m1 = MessageBlock(Matrix::from_codes(&field, l, cols, codes[..l * cols].to_vec()).unwrap());
        let m2 = MessageBlock(Matrix::from_codes(&field, l, cols, codes[l * cols..].to_vec()).unwrap());
        let x1 = code.encode(&m1).unwrap();
        let x2 = code.encode(&m2).unwrap();
        // roundtrip
        prop_assert_eq!(&code.decode(&x1).unwrap(), &m1);
        // linearity: encode(m1 + m2) = encode(m1) + encode(m2)
        let msum = MessageBlock(m1.0.add(&m2.0).unwrap());
        let xsum = code.encode(&msum).unwrap();
        prop_assert_eq!(xsum.0, x1.0.add(&x2.0).unwrap());
    }

    #[test]
    fn packing_is_inverse(
        (u, k_b, codes) in (2usize..=8, 0usize..=3usize, any::<u64>()).prop_flat_map(|(u, slack, key)| {
            // k_b between one and four symbols, possibly fractional
            let k_b = u + slack * u + (slack % u.min(2));
            let count = k_b.div_ceil(u);
            let mut gen = key;
            let mut next = move || {
                gen = gen.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                gen
            };
            let mut codes: Vec<u64> = (0..count).map(|_| next() & ((1 << u) - 1)).collect();
            // keep the truncated symbol inside its reduced range
            let r = k_b - (count - 1) * u;
            if let Some(last) = codes.last_mut() {
                *last &= (1u64 << r) - 1;
            }
            (Just(u), Just(k_b), Just(codes))
        })
    ) {
        let field = FieldSpec::auto(2, u).unwrap();
        let bits = pack_symbols_to_bits(&field, &codes, k_b).unwrap();
        prop_assert_eq!(bits.len(), k_b);
        prop_assert_eq!(unpack_bits_to_symbols(&field, &bits).unwrap(), codes);
    }

    #[test]
    fn byte_pipeline_roundtrips(
        (l, c, msg) in (2usize..=4, 1usize..=4, prop::collection::vec(any::<u8>(), 0..200))
    ) {
        let c = c.min(l);
        let cipher = IdentityCipher::new(12);
        let config = HunccConfig::standard(4, l, c, Encryptor::spec(&cipher), [9; 32]).unwrap();
        let t = huncc_encode(&config, &msg, &EncryptKeys::Shared(&cipher), [1; 32]).unwrap();
        let back = huncc_decode(&config, &t, &DecryptKeys::Shared(&cipher)).unwrap();
        prop_assert_eq!(back, msg);
    }

    #[test]
    fn sweep_csv_reparse_is_stable(l in 1usize..=12) {
        let preset = find_builtin_preset("pq2960").unwrap();
        let table = sweep(&preset, l, None).unwrap();
        let csv = table.to_csv();
        let back = SweepTable::parse_csv(&table.preset_id, l, &csv).unwrap();
        prop_assert_eq!(back.to_csv(), csv);
    }
}

#[test]
fn shared_types_are_send_sync() {
    fn pin<T: Send + Sync>() {}
    pin::<FieldSpec>();
    pin::<IsCode>();
    pin::<HunccConfig>();
    pin::<huncc_core::cryptosys::McEliecePublicKey>();
    pin::<huncc_core::cryptosys::McEliecePrivateKey>();
}
