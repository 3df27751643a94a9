mod common;

use common::*;
use galembed::descent::{project_eigen, transfer_check, DescentConfig};
use galembed::embed::Kind;
use galembed::kummer::{index_of_element, lift_class, KummerClass};
use galembed::linalg::sub_vec;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn projector_properties(seed in any::<u64>()) {
        let cfg = DescentConfig::new(3, 5).unwrap();
        let a = &cfg.arena;
        let mut rng = rng(seed);
        let window = random_window(a, 1, &mut rng);
        let atoms: Vec<_> = window.atoms().iter().map(|p| galembed::arena::FieldElement::atom(p.clone(), 1)).collect();
        let space = cfg.epsilon_space(&atoms);
        let c = KummerClass { coords: random_vector(3, space.dim(), &mut rng) };
        let tc = project_eigen(&cfg, &space, &c).unwrap();
        prop_assert_eq!(project_eigen(&cfg, &space, &tc).unwrap(), tc.clone());
        let sigma_c = KummerClass { coords: space.sigma_matrix().mul_vec(&c.coords) };
        prop_assert_eq!(
            project_eigen(&cfg, &space, &sigma_c).unwrap().coords,
            space.sigma_matrix().mul_vec(&tc.coords)
        );
        // ε acts on image(T) by t_eig, checked through the field automorphism
        let x = lift_class(a, &space, &tc).unwrap();
        let lhs = cfg.epsilon(&x);
        let rhs = a.pow(&x, cfg.t_eig as i64);
        prop_assert!(a.is_pth_power(&a.div(&lhs, &rhs)));

        let kernel = space.rho_matrix().pow(2).kernel();
        let d = KummerClass { coords: random_combination(3, space.dim(), &kernel, &mut rng) };
        let td = project_eigen(&cfg, &space, &d).unwrap();
        let rest = KummerClass { coords: sub_vec(&d.coords, &td.coords, 3) };
        prop_assert_eq!(index_of_element(a, &lift_class(a, &space, &rest).unwrap()), Some(0));
    }

    #[test]
    fn transfer_agrees(seed in any::<u64>(), nonsplit in any::<bool>()) {
        let cfg = DescentConfig::new(3, 5).unwrap();
        let a = &cfg.arena;
        let mut rng = rng(seed);
        let space = random_window(a, 1, &mut rng);
        let gamma = random_element_of_length(a, &space, 1, &mut rng);
        let kind = if nonsplit { Kind::Nonsplit } else { Kind::Split };
        let r = transfer_check(&cfg, &gamma, 2, 1, kind).unwrap();
        prop_assert!(r.agreement);
    }
}

#[test]
fn unsupported_base_fields() {
    assert!(DescentConfig::new(3, 4).is_err()); // 3 | 4 − 1
    assert!(DescentConfig::new(5, 3).is_err()); // ε of order 4
    assert!(DescentConfig::new(3, 11).is_ok());
}
