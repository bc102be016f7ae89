//! Randomized invariants: algebraic identities the closed-form machinery
//! must satisfy for any admissible parameters, and structural guarantees of
//! the numerical oracle (similarity invariance, real spectra for real
//! potentials, eigenpair residuals).

use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use ptscarf::model::{partner_potentials, pt_symmetry_residual, scarf2_potentials, ScarfModel, SuperpotentialSpec};
use ptscarf::nu::{
    dirac_energy, nu_energy, nu_energy_closed, nu_k_roots, nu_pi, Branch, NUProblem, WeightFunction,
};
use ptscarf::oracle::{
    discretize_schrodinger, eigvals_complex_dense, match_spectra, matrix_norm_lower,
};
use ptscarf::profile::Profile;
use ptscarf::stencil::Acc;
use ptscarf::Grid;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cbox(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partner_potentials_bracket_the_superpotential(
        k in -1.5f64..1.5,
        amp in cbox(2.0),
        mu in 0.4f64..2.0,
        tanh_shape in any::<bool>(),
        x in -3.0f64..3.0,
    ) {
        let a_y = if tanh_shape {
            Profile::Tanh { amp, mu }
        } else {
            Profile::Sech { amp, mu }
        };
        let spec = SuperpotentialSpec { k, a_y };
        let w = spec.w(x).unwrap();
        let (vp, vm) = partner_potentials(&spec, x).unwrap();
        // sum isolates W^2
        prop_assert!(((vp + vm) / 2.0 - w * w).norm() < 1e-12);
        // difference isolates W'; check against a five-point derivative of W
        let h = 1e-3;
        let stencil = [
            (-2.0, 1.0 / 12.0),
            (-1.0, -8.0 / 12.0),
            (1.0, 8.0 / 12.0),
            (2.0, -1.0 / 12.0),
        ];
        let mut wp = c(0.0, 0.0);
        for (off, weight) in stencil {
            wp += spec.w(x + off * h).unwrap() * weight;
        }
        wp /= h;
        prop_assert!(((vp - vm) / 2.0 - wp).norm() < 1e-7 * (1.0 + wp.norm()));
    }

    #[test]
    fn scarf_potentials_are_pt_symmetric(
        a in 0.3f64..2.5,
        mu in 0.4f64..2.0,
        half in proptest::collection::vec(0.05f64..4.0, 2..6),
    ) {
        let m = ScarfModel::new(a, mu).unwrap();
        let mut xs: Vec<f64> = half.iter().map(|&x| -x).collect();
        xs.sort_by(f64::total_cmp);
        xs.push(0.0);
        let mut rest = half.clone();
        rest.sort_by(f64::total_cmp);
        xs.extend(rest);
        let r1 = pt_symmetry_residual(|x| scarf2_potentials(&m, x).0, &xs).unwrap();
        let r2 = pt_symmetry_residual(|x| scarf2_potentials(&m, x).1, &xs).unwrap();
        prop_assert!(r1 < 1e-12 && r2 < 1e-12, "residuals {r1}, {r2}");
    }

    #[test]
    fn pi_satisfies_the_square_relation_for_random_couplings(
        a1 in cbox(3.0),
        a2 in cbox(3.0),
        ebar in cbox(2.0),
        z in -2.5f64..2.5,
    ) {
        let prob = NUProblem::new(a1, a2, 1.0).unwrap();
        for branch in [Branch::K1, Branch::K2] {
            let b = match nu_pi(&prob, branch) {
                Ok(b) => b,
                Err(_) => continue, // growth branch, nothing to check
            };
            let k = b.k_affine.eval(ebar);
            let zc = c(z, 0.0);
            let pi = b.p1 * zc + b.p0;
            let lhs = (pi - zc / 2.0) * (pi - zc / 2.0);
            let sigma_tilde = ebar - a1 - a2 * zc + ebar * zc * zc;
            let rhs = zc * zc / 4.0 - sigma_tilde + k * (zc * zc + 1.0);
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            prop_assert!((lhs - rhs).norm() < 1e-10 * scale, "branch {branch:?}");
        }
    }

    #[test]
    fn quantization_lines_always_have_unit_slope(
        a1 in cbox(3.0),
        a2 in cbox(3.0),
        mu in 0.3f64..2.0,
    ) {
        let prob = NUProblem::new(a1, a2, mu).unwrap();
        let (k1, k2) = nu_k_roots(&prob);
        prop_assert_eq!(k1.c1, c(1.0, 0.0));
        prop_assert_eq!(k2.c1, c(1.0, 0.0));
        for branch in [Branch::K1, Branch::K2] {
            if let Ok(b) = nu_pi(&prob, branch) {
                prop_assert_eq!(b.lambda_affine.c1, c(1.0, 0.0));
            }
        }
    }

    #[test]
    fn energies_are_even_in_the_tilt_coupling(
        a1 in cbox(3.0),
        a2 in cbox(3.0),
        mu in 0.3f64..2.0,
        n in 0usize..4,
    ) {
        let plus = NUProblem::new(a1, a2, mu).unwrap();
        let minus = NUProblem::new(a1, -a2, mu).unwrap();
        for branch in [Branch::K1, Branch::K2] {
            let ep = nu_energy_closed(&plus, branch, n);
            let em = nu_energy_closed(&minus, branch, n);
            prop_assert!((ep - em).norm() < 1e-11 * (1.0 + ep.norm()));
        }
    }

    #[test]
    fn the_two_energy_routes_agree_everywhere(
        a1 in cbox(3.0),
        a2 in cbox(3.0),
        mu in 0.3f64..2.0,
        n in 0usize..6,
    ) {
        let prob = NUProblem::new(a1, a2, mu).unwrap();
        for branch in [Branch::K1, Branch::K2] {
            let affine = nu_energy(&prob, branch, n).unwrap();
            let closed = nu_energy_closed(&prob, branch, n);
            prop_assert!(
                (affine - closed).norm() < 1e-11 * (1.0 + affine.norm()),
                "branch {branch:?}: {affine} vs {closed}"
            );
        }
    }

    #[test]
    fn weight_solves_its_pearson_equation(
        p in cbox(2.0),
        q in cbox(2.0),
        z in -2.0f64..2.0,
    ) {
        // ((1+z^2) rho)' = (2 + 2p) z rho + q rho, checked with a five-point
        // derivative of the closed form
        let rho = WeightFunction { p, q };
        let h = 1e-3;
        let stencil = [
            (-2.0, 1.0 / 12.0),
            (-1.0, -8.0 / 12.0),
            (1.0, 8.0 / 12.0),
            (2.0, -1.0 / 12.0),
        ];
        let mut lhs = c(0.0, 0.0);
        for (off, weight) in stencil {
            let zz = z + off * h;
            lhs += rho.eval(zz) * (1.0 + zz * zz) * weight;
        }
        lhs /= h;
        let rhs = ((p * 2.0 + 2.0) * z + q) * rho.eval(z);
        prop_assert!((lhs - rhs).norm() < 1e-6 * (1.0 + rhs.norm()));
    }

    #[test]
    fn dispersion_roots_square_back_to_the_energy(
        e in cbox(4.0),
        v_f in 0.1f64..3.0,
        imaginary in any::<bool>(),
    ) {
        let (plus, minus) = dirac_energy(e, v_f, imaginary);
        prop_assert!((plus + minus).norm() < 1e-14);
        let target = if imaginary { -e * v_f * v_f } else { e * v_f * v_f };
        prop_assert!((plus * plus - target).norm() < 1e-12 * (1.0 + target.norm()));
    }

    #[test]
    fn spectrum_matching_is_exact_on_identical_sets(
        raw in proptest::collection::vec(cbox(5.0), 1..6),
        rot in 0usize..5,
    ) {
        // thin the set so distinct levels stay separated well beyond tol
        let mut levels: Vec<C64> = Vec::new();
        for v in raw {
            if levels.iter().all(|u| (u - v).norm() > 1e-3) {
                levels.push(v);
            }
        }
        let mut shuffled = levels.clone();
        shuffled.rotate_left(rot % levels.len().max(1));
        let report = match_spectra(&levels, &shuffled, 1e-6);
        prop_assert!(report.all_matched());
        prop_assert_eq!(report.pairs.len(), levels.len());
        for pair in &report.pairs {
            prop_assert!(pair.matched && pair.abs_err.unwrap() < 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn similarity_transforms_preserve_the_spectrum(
        entries in proptest::collection::vec(cbox(1.0), 36..=36),
        phases in proptest::collection::vec(0.0f64..6.283, 6..=6),
    ) {
        let dim = 6;
        let m = Array2::from_shape_vec((dim, dim), entries).unwrap();
        let mut sim = m.clone();
        // conjugate by the diagonal unitary D = diag(e^{i theta_j})
        for i in 0..dim {
            for j in 0..dim {
                let d = c(0.0, phases[i]).exp() * c(0.0, -phases[j]).exp();
                sim[[i, j]] *= d;
            }
        }
        let a = eigvals_complex_dense(&m).unwrap();
        let b = eigvals_complex_dense(&sim).unwrap();
        let tol = 1e-9 * (1.0 + matrix_norm_lower(&m));
        let report = match_spectra(&a, &b, tol);
        prop_assert!(report.all_matched(), "unmatched: {:?}", report.unmatched_numeric);
    }

    #[test]
    fn real_potentials_have_real_spectra_and_true_eigenpairs(
        c0 in -1.0f64..1.0,
        c1 in -1.0f64..1.0,
        w1 in 0.3f64..1.5,
        g in -2.0f64..2.0,
    ) {
        let grid = Grid::new(6.0, 41).unwrap();
        let u = |x: f64| c(c0 + c1 * (w1 * x).cos() + g * (-x * x / 2.0).exp(), 0.0);
        let op = discretize_schrodinger(u, &grid, Acc::Two).unwrap();
        let norm = matrix_norm_lower(&op.matrix);
        let eig = op.eigen().unwrap();
        for lam in &eig.values {
            prop_assert!(lam.im.abs() <= 1e-8 * norm, "Im {} vs norm {}", lam.im, norm);
        }
        // residual check on a spread of eigenpairs
        for idx in [0, eig.values.len() / 2, eig.values.len() - 1] {
            let lam = eig.values[idx];
            let v = &eig.vectors[idx];
            let mut worst = 0.0f64;
            let mut vnorm = 0.0f64;
            for i in 0..op.dim() {
                let mut acc = c(0.0, 0.0);
                for j in 0..op.dim() {
                    acc += op.matrix[[i, j]] * v[j];
                }
                worst = worst.max((acc - lam * v[i]).norm());
                vnorm = vnorm.max(v[i].norm());
            }
            prop_assert!(worst <= 1e-8 * (norm + lam.norm()) * vnorm);
        }
    }
}
