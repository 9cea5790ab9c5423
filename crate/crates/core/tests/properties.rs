use num_complex::Complex64;
use proptest::prelude::*;
use wmono_core::measures::{coa_two_qubit, concurrence_two_qubit};
use wmono_core::monogamy::{coa_lower_eq4, coa_lower_th2, coa_upper_th3, OrderingProfile};
use wmono_core::wclass::{
    block_concurrence_closed, pair_concurrence_closed, reduce, SubsystemSelection,
};
use wmono_core::WClassCoefficients;

fn coefficients() -> impl Strategy<Value = WClassCoefficients> {
    (3usize..=6)
        .prop_flat_map(|n| prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1))
        .prop_filter_map("nonzero b", |raw| {
            let z: Vec<Complex64> = raw.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
            if z[1..].iter().map(|c| c.norm_sqr()).sum::<f64>() < 1e-6 {
                return None;
            }
            WClassCoefficients::normalized(z[0], z[1..].to_vec()).ok()
        })
}

fn pair_values(c: &WClassCoefficients) -> (Vec<f64>, Vec<f64>) {
    let n = c.n_qubits();
    (1..n)
        .map(|j| {
            let rho = reduce(c, &SubsystemSelection::new(n, vec![j]).unwrap()).unwrap();
            (
                concurrence_two_qubit(&rho).unwrap(),
                coa_two_qubit(&rho).unwrap(),
            )
        })
        .unzip()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pair_measures_match_closed_form(c in coefficients()) {
        let (conc, coa) = pair_values(&c);
        for (j, (&cv, &av)) in conc.iter().zip(&coa).enumerate() {
            let closed = pair_concurrence_closed(&c, j + 1).unwrap();
            prop_assert!((cv - closed).abs() < 1e-10);
            prop_assert!((av - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn bounds_hold_on_full_block(c in coefficients(), x in 2.0f64..10.0, y in -10.0f64..-0.01) {
        let n = c.n_qubits();
        let full = SubsystemSelection::full(n).unwrap();
        let lhs = block_concurrence_closed(&c, &full).unwrap();
        let (conc, coa) = pair_values(&c);
        prop_assert!(coa_lower_eq4(&coa, x, lhs).unwrap().satisfied != Some(false));
        let downstream: Vec<f64> = (1..n - 1)
            .map(|pos| block_concurrence_closed(&c, &full.tail(pos).unwrap()).unwrap())
            .collect();
        let profile = OrderingProfile::from_values(conc, downstream).unwrap();
        let r = coa_lower_th2(&coa, &profile, x, lhs).unwrap();
        prop_assert!(r.satisfied != Some(false), "{:?}", r);
        if coa.iter().all(|&v| v > 1e-9) {
            let r = coa_upper_th3(&coa, y, lhs).unwrap();
            prop_assert!(r.satisfied != Some(false), "{:?}", r);
        }
    }

    #[test]
    fn block_value_grows_with_the_block(c in coefficients()) {
        let n = c.n_qubits();
        let mut prev = 0.0;
        for k in 1..n {
            let v = block_concurrence_closed(&c, &SubsystemSelection::new(n, (1..=k).collect()).unwrap()).unwrap();
            prop_assert!(v >= prev - 1e-14);
            prev = v;
        }
    }
}
