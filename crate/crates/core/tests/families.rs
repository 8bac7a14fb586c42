use sailkit::families::{family_instance, shanks_verify, verify_family, verify_instance};

#[test]
fn family_zero_all_checks() {
    let r = verify_family(0).unwrap();
    for c in &r.checks {
        println!("{} {} {} {:?}", c.name, c.pass, c.detail, c.witnesses);
    }
    assert!(r.pass);
    assert_eq!(r.iota, Some(3));
}

#[test]
fn corrupted_gamma_fails_incidences() {
    let mut inst = family_instance(0).unwrap();
    inst.gamma[1] = &inst.gamma[1] + &inst.field.one();
    let r = verify_instance(&inst);
    let b = r.check("b_trace_one_incidences").unwrap();
    assert!(!b.pass);
    assert!(b.witnesses.iter().any(|w| w.contains("gamma_1")));
    assert!(!r.pass);
}

#[test]
fn shanks_with_bruteforce() {
    for a in [-1i64, 1, 2] {
        let r = shanks_verify(a, true).unwrap();
        assert!(r.pass, "{r:#?}");
    }
}

#[test]
fn family_one_all_checks() {
    let r = verify_family(1).unwrap();
    for c in &r.checks {
        println!("{} {} {} {:?}", c.name, c.pass, c.detail, c.witnesses);
    }
    assert!(r.pass);
    assert_eq!(r.iota, Some(9));
}

#[test]
fn family_zero_bruteforce_iota() {
    use sailkit::indecomp::{iota_bruteforce, BruteForceOptions};
    let inst = family_instance(0).unwrap();
    let set = iota_bruteforce(&inst.field, &BruteForceOptions::default()).unwrap();
    let mut named = vec![inst.field.one(), inst.rho.clone(), inst.gamma[1].clone()];
    named.dedup();
    assert_eq!(set.count(), 3);
    assert!(set.same_classes(&named));
}
