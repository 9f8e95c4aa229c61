//! Reference values frozen from `tests/oracle/freeze_values.py` (mpmath,
//! 300-digit brute-force series, Airy closed form, Talbot inversion).

// frozen reference values keep all printed digits
#![allow(clippy::excessive_precision)]

use thetafrac::specfun::{
    mittag_leffler, recip_gamma, wright_m, wright_w, SeriesTolerance, WrightSpec,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn recip_gamma_matches_reference() {
    let cases = [
        (0.5, 0.56418958354775628695),
        (0.001, 0.001000576559744993874),
        (2.5, 0.75225277806367504926),
        (7.3, 0.00078651990848892938528),
        (33.75, 2.7680468637825836093e-37),
        (150.2, 9.6429824017291104226e-262),
        (-0.5, -0.28209479177387814347),
        (-2.5, -1.057855469152043038),
        (-7.3, 2390.1266372689996294),
        (-33.75, 2.7443245332902151316e+37),
        (-150.5, -2.2329165736257515592e+263),
        (-169.25, 3.4676943870986646696e+304),
    ];
    for (x, want) in cases {
        let got = recip_gamma(x);
        assert!(rel(got, want) < 1e-13, "1/Gamma({x}) = {got}, want {want}");
    }
}

#[test]
fn wright_m_matches_brute_force_series() {
    let tol = SeriesTolerance::default();
    let cases = [
        (0.1, 0.5, 0.58997719062309721549),
        (0.1, 1.0, 0.37029046275149084308),
        (0.1, 2.0, 0.14406688865856316519),
        (0.1, 3.0, 0.055214685040576806287),
        (0.25, 0.5, 0.56796881884076957626),
        (0.25, 1.0, 0.38333541657068353578),
        (0.25, 2.0, 0.16125108345458585591),
        (0.25, 3.0, 0.061922084251616722262),
        (0.35, 0.5, 0.55397132011706777387),
        (0.35, 1.0, 0.39940099549169058633),
        (0.35, 2.0, 0.17646113560840000193),
        (0.35, 3.0, 0.064500456875606113605),
        (0.5, 0.5, 0.53000706468805712175),
        (0.5, 1.0, 0.43939128946772239705),
        (0.5, 2.0, 0.20755374871029735167),
        (0.5, 3.0, 0.059465144611814685766),
        (0.75, 0.5, 0.44502484123873669753),
        (0.75, 1.0, 0.60659854359027597898),
        (0.75, 2.0, 0.22514007014896749913),
        (0.75, 3.0, 0.00035126361023134093759),
        (0.9, 0.5, 0.28004174208736584802),
        (0.9, 1.0, 1.0081467456212710728),
        (0.9, 2.0, 7.8193669162221498296e-17),
        (0.15, 6.0, 0.0028372633308160777072),
        (0.15, 10.0, 0.000038215024669005259073),
        (0.15, 15.0, 1.2352928246660595294e-7),
        (0.25, 6.0, 0.0022713915884273748544),
        (0.25, 10.0, 0.000012708213116565744653),
        (0.25, 15.0, 7.5480263258912041504e-9),
        (0.35, 6.0, 0.0012316664807406244176),
        (0.35, 10.0, 1.059456219282104669e-6),
        (0.35, 15.0, 1.5349811334550895819e-11),
    ];
    for (alpha, z, want) in cases {
        let got = wright_m(alpha, z, &tol).unwrap();
        assert!(rel(got, want) < 1e-9, "M_{alpha}({z}) = {got}, want {want}");
    }
}

#[test]
fn wright_m_third_order_matches_airy() {
    let tol = SeriesTolerance::default();
    let cases = [
        (1.0, 0.39623947970650259057),
        (5.0, 0.005731230347769887201),
        (10.0, 1.8611793688290854072e-6),
        (20.0, 3.3952186537869312185e-16),
        (40.0, 1.3149222784102094166e-43),
    ];
    for (z, want) in cases {
        let got = wright_m(1.0 / 3.0, z, &tol).unwrap();
        assert!(rel(got, want) < 1e-9, "M_1/3({z}) = {got}, want {want}");
    }
}

#[test]
fn wright_w_matches_brute_force_series() {
    let tol = SeriesTolerance::default();
    let cases = [
        (-0.25, 0.25, -1.5, 0.16416827630602986228),
        (-0.25, 0.25, -4.0, 0.023715709850269808321),
        (-0.35, 0.35, -2.5, 0.11079335230240651181),
        (-0.15, 0.15, -6.0, 0.0027904551699028769071),
        (-0.3, 0.9, -2.0, 0.16794550333536671083),
        (-0.6, 0.2, -1.2, 0.40505444520752329321),
    ];
    for (lambda, mu, z, want) in cases {
        let got = wright_w(WrightSpec { lambda, mu }, z, &tol).unwrap();
        assert!(
            rel(got, want) < 1e-9,
            "W_({lambda},{mu})({z}) = {got}, want {want}"
        );
    }
}

#[test]
fn mittag_leffler_half_matches_erfc_reference() {
    let tol = SeriesTolerance::default();
    let cases = [
        (1.0, 0.42758357615580700441),
        (2.5, 0.21080636406114358065),
        (5.0, 0.11070463773306862637),
    ];
    for (x, want) in cases {
        let got = mittag_leffler(0.5, 1.0, -x, &tol).unwrap();
        assert!(rel(got, want) < 1e-10, "E_1/2(-{x}) = {got}, want {want}");
    }
}

#[test]
fn quarter_order_constants() {
    let tol = SeriesTolerance::default();
    let m0 = wright_m(0.25, 0.0, &tol).unwrap();
    assert!(rel(0.5 * m0, 0.40802446954913149054) < 1e-14);
    let w0 = wright_w(WrightSpec::derivative(0.25), 0.0, &tol).unwrap();
    assert!(rel(0.5 * w0, 0.13790783141510465718) < 1e-14);
}
