use critset::constructions::*;
use critset::defsets::{is_critical, CertifiedCriticalSet};
use critset::fixtures;
use critset::walks::block_structure;

#[test]
fn spectrum_of_one_is_a_single_cell() {
    let s = spectrum(1).unwrap();
    assert_eq!(s.keys().copied().collect::<Vec<_>>(), vec![1]);
}

#[test]
fn spectrum_five_certifies() {
    let s = spectrum(5).unwrap();
    assert_eq!(s.keys().copied().collect::<Vec<_>>(), (25..=57).collect::<Vec<_>>());
    for (k, c) in s {
        let mut c = c;
        assert!(c.certificate.as_ref().unwrap().verify_handier(&c.matrix).unwrap(), "k={k}");
        assert!(c.verify_by_certificates().unwrap(), "k={k}");
    }
}

#[test]
fn m_3_13_is_critical_by_counting() {
    let c = build_m_k(3, 13).unwrap();
    assert_eq!(c.size(), 13);
    assert!(is_critical(&c.matrix, &c.cells).unwrap());
}

#[test]
fn three_trades_on_x8_give_28() {
    let mut c = spectrum_upper(4, 28).unwrap();
    assert_eq!(c.size(), 28);
    // X-based: the walk is the plain staircase
    assert_eq!(c.certificate.as_ref().unwrap().walk.depth(), &(0..8).collect::<Vec<_>>()[..]);
    assert!(c.verify_by_certificates().unwrap());
    assert!(c.verify_by_counting().unwrap());
}

#[test]
fn fixtures_in_the_spectrum_are_critical() {
    for name in ["fig1", "filly-left", "filly-right", "tryagain"] {
        let (m, cs) = fixtures::load(name).unwrap();
        assert!(is_critical(&m, &cs).unwrap(), "{name}");
    }
}

#[test]
fn sup_pair_on_b4_and_x8() {
    for m in [build_b(2).unwrap(), build_x(4).unwrap()] {
        let (c1, c2) = sup_pair(&m).unwrap();
        assert!(is_critical(&m, &c1.cells).unwrap());
        assert!(is_critical(&m, &c2.cells).unwrap());
        let n = m.rows() / 2;
        assert!(c1.size() + c2.size() > 3 * n * (n - 1));
    }
}

#[test]
fn b_maximum_exceeds_the_unit_pair_from_m_4() {
    for m in 4..=6 {
        let r = b_max_critical(m).unwrap();
        assert!(r.size > 2 * m * m - m);
        let b = build_b(m).unwrap();
        let cert = b_certificate(m, &r.witness).unwrap();
        assert!(cert.verify_handier(&b).unwrap());
        let mut c = CertifiedCriticalSet::with_certificate(b, cert).unwrap();
        assert_eq!(c.size(), r.size);
        assert!(c.verify_by_certificates().unwrap());
    }
    assert_eq!(
        (2..=6).map(|m| b_max_critical(m).unwrap().size).collect::<Vec<_>>(),
        [6, 15, 30, 51, 78]
    );
}

#[test]
fn b_certificate_runs_round_trip() {
    let c = CompositionPair::new(3, vec![1, 3, 2], vec![2, 1, 1, 2]).unwrap();
    let cert = b_certificate(3, &c).unwrap();
    let bs = block_structure(&cert.walk).unwrap();
    assert_eq!(bs.row_runs(), &[1, 3, 2]);
    assert_eq!(bs.col_runs(), &[2, 1, 1, 2]);
}
