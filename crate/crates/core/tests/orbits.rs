//! Orbit catalogs against an independent automorphism count and full
//! orbit closure.

use std::collections::BTreeSet;

use nearfact::combinatorics::{binomial, Combinations};
use nearfact::{gl_orbit_catalog, mixed_aut_orbits, GroupSpec, OrbitCatalog, OrbitContext};

/// Automorphisms of `Z_a x Z_b` found by trying every pair of generator images.
fn brute_automorphisms(g: &GroupSpec) -> Vec<Vec<usize>> {
    let n = g.order();
    let gens: Vec<usize> = (0..g.factors().len())
        .map(|i| {
            let mut c = vec![0u64; g.factors().len()];
            c[i] = 1;
            g.encode(&nearfact::GroupElement::new(c)).unwrap().0
        })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    fn rec(g: &GroupSpec, gens: &[usize], i: usize, images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, n: usize) {
        if i == gens.len() {
            let map: Vec<usize> = (0..n)
                .map(|x| {
                    let c = g.decode(nearfact::ElementIndex(x)).coords;
                    c.iter().zip(images.iter()).fold(0, |acc, (&k, &im)| g.add_idx(acc, g.scale_idx(k, im)))
                })
                .collect();
            if map.iter().collect::<BTreeSet<_>>().len() == n {
                out.push(map);
            }
            return;
        }
        let ord = g.factors()[i];
        for y in 0..n {
            if ord.is_multiple_of(g.element_order(y)) {
                images[i] = y;
                rec(g, gens, i + 1, images, out, n);
            }
        }
    }
    rec(g, &gens, 0, &mut images, &mut out, n);
    out
}

fn assert_closed(cat: &OrbitCatalog, pool: &[usize]) {
    let auts = cat.automorphisms();
    let mut covered = BTreeSet::new();
    for rep in &cat.representatives {
        let orbit: BTreeSet<Vec<usize>> = auts
            .iter()
            .map(|phi| {
                let mut v: Vec<usize> = rep.iter().map(|&x| phi[x]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        assert!(orbit.is_disjoint(&covered), "{} i1={}: representatives overlap", cat.context, cat.i1);
        covered.extend(orbit);
    }
    let all: BTreeSet<Vec<usize>> = Combinations::new(pool.len(), cat.i1)
        .map(|c| c.iter().map(|&i| pool[i]).collect())
        .collect();
    assert_eq!(covered, all, "{} i1={}", cat.context, cat.i1);
    assert_eq!(cat.orbit_sizes.iter().sum::<usize>() as u128, binomial(pool.len(), cat.i1).unwrap());
}

#[test]
fn gl_catalogs_are_closed() {
    for k in 1..=4usize {
        let p = OrbitContext::Gl(k).two_group();
        let gl_order: usize = (0..k).map(|i| (1usize << k) - (1usize << i)).product();
        let pool: Vec<usize> = (0..p.order()).collect();
        for i1 in 0..=p.order() {
            let cat = gl_orbit_catalog(k, i1).unwrap();
            assert_eq!(cat.automorphisms().len(), gl_order);
            assert_closed(&cat, &pool);
        }
    }
}

#[test]
fn small_gl_orbit_counts() {
    assert_eq!(gl_orbit_catalog(2, 3).unwrap().len(), 2);
    assert_eq!(gl_orbit_catalog(3, 3).unwrap().len(), 3);
}

#[test]
fn mixed_catalogs_are_closed() {
    for ctx in [OrbitContext::Z2xZ4, OrbitContext::Z2xZ8] {
        let p = ctx.two_group();
        let brute = brute_automorphisms(&p);
        let cat = mixed_aut_orbits(ctx).unwrap();
        assert_eq!(cat.automorphisms().len(), brute.len(), "{ctx}");
        let ours: BTreeSet<&Vec<usize>> = cat.automorphisms().iter().collect();
        assert_eq!(ours, brute.iter().collect());
        let involutions = p.involution_indices();
        for i1 in 0..=involutions.len() {
            assert_closed(&OrbitCatalog::new(ctx, i1).unwrap(), &involutions);
        }
    }
    assert_eq!(brute_automorphisms(&OrbitContext::Z2xZ4.two_group()).len(), 8);
}

#[test]
fn z2xz4_orbit_structure() {
    let p = OrbitContext::Z2xZ4.two_group();
    let idx = |a: u64, b: u64| p.encode(&nearfact::GroupElement::new(vec![a, b])).unwrap().0;
    let cat = mixed_aut_orbits(OrbitContext::Z2xZ4).unwrap();
    for phi in cat.automorphisms() {
        assert_eq!(phi[idx(0, 2)], idx(0, 2));
        let pair = [idx(1, 0), idx(1, 2)];
        assert!(pair.contains(&phi[idx(1, 0)]));
    }
    assert!(cat.automorphisms().iter().any(|phi| phi[idx(1, 0)] == idx(1, 2)));
}
