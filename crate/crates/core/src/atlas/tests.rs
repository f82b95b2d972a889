use super::*;
use crate::root_datum::{DiagramAutomorphism, RootDatum};

fn group(d: RootDatum) -> AffineWeylGroup {
    let s = DiagramAutomorphism::identity(&d);
    AffineWeylGroup::new(d, s).unwrap()
}

fn sizes(a: &StratAtlas) -> (usize, usize, usize) {
    (a.kr.len(), a.ekor.len(), a.newton.len())
}

#[test]
fn gl2_examples() {
    let g = group(RootDatum::gl(2).unwrap());
    let hyper = build_atlas(&g, &[1, 0], &ParahoricType::hyperspecial(&g)).unwrap();
    assert_eq!(sizes(&hyper), (1, 2, 2));
    assert_eq!(hyper.ekor.covers, vec![[0, 1]]);
    assert_eq!(hyper.ekor.nodes.iter().map(|n| n.dim).collect::<Vec<_>>(), vec![0, 1]);
    assert_eq!(hyper.kr.nodes[0].dim, 1);
    let dims: Vec<Option<&str>> = hyper.newton.nodes.iter().map(|n| n.dim.as_deref()).collect();
    assert_eq!(dims, vec![Some("0"), Some("1")]);
    assert!(hyper.newton.nodes[0].basic);

    let iw = build_atlas(&g, &[1, 0], &ParahoricType::iwahori()).unwrap();
    assert_eq!(sizes(&iw), (3, 3, 2));
    assert_eq!(iw.kr.covers, vec![[0, 1], [0, 2]]);
    assert_eq!(iw.ekor.covers, iw.kr.covers);
}

#[test]
fn gsp4_iwahori_sizes() {
    let g = group(RootDatum::gsp(2).unwrap());
    let a = build_atlas(&g, &[1, 1, 1], &ParahoricType::iwahori()).unwrap();
    assert_eq!(a.kr.len(), 13);
    assert_eq!(a.ekor.len(), 13);
    assert_eq!(a.newton.len(), 3);
}

#[test]
fn structural_invariants() {
    let g = group(RootDatum::gsp(2).unwrap());
    for j in ParahoricType::all(&g) {
        let a = build_atlas(&g, &[1, 1, 1], &j).unwrap();
        // Surjective and order-compatible.
        let mut hit = vec![false; a.kr.len()];
        for &k in &a.maps.ekor_to_kr {
            hit[k] = true;
        }
        assert!(hit.iter().all(|&h| h));
        let kr_order = a.kr.order();
        let elts: Vec<AffineElement> = a.ekor.nodes.iter().map(|n| g.parse(&n.elt).unwrap()).collect();
        for (p, x) in elts.iter().enumerate() {
            for (q, y) in elts.iter().enumerate() {
                if g.bruhat_leq(x, y) {
                    assert!(kr_order[a.maps.ekor_to_kr[p]][a.maps.ekor_to_kr[q]]);
                }
            }
        }
        // Unique minimum and maximum of the Newton poset.
        let order = a.newton.order();
        let n = a.newton.len();
        assert_eq!((0..n).filter(|&i| (0..n).all(|k| order[i][k])).count(), 1);
        assert_eq!((0..n).filter(|&i| (0..n).all(|k| order[k][i])).count(), 1);
        // Every Newton class has a straight EKOR index.
        for b in 0..n {
            assert!(a.maps.straight_ekor_to_newton.iter().any(|&[_, c]| c == b));
        }
        // Lengths strictly increase along covers.
        for &[lo, hi] in &a.ekor.covers {
            assert!(a.ekor.nodes[lo].dim < a.ekor.nodes[hi].dim);
        }
        for &[lo, hi] in &a.kr.covers {
            assert!(a.kr.nodes[lo].dim < a.kr.nodes[hi].dim);
        }
    }
}

#[test]
fn transitive_reduction_of_chain_and_diamond() {
    let chain = vec![vec![true, true, true], vec![false, true, true], vec![false, false, true]];
    assert_eq!(transitive_reduction(&chain), vec![[0, 1], [1, 2]]);
    let mut diamond = vec![vec![false; 4]; 4];
    for (a, b) in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
        diamond[a][b] = true;
    }
    let p = Poset::from_relation(vec![(); 4], &diamond);
    assert_eq!(p.covers, vec![[0, 1], [0, 2], [1, 3], [2, 3]]);
    assert_eq!(p.order(), diamond);
}

#[test]
fn change_parahoric_examples() {
    let g = group(RootDatum::gl(2).unwrap());
    let iw = build_atlas(&g, &[1, 0], &ParahoricType::iwahori()).unwrap();
    let hyper = build_atlas(&g, &[1, 0], &ParahoricType::hyperspecial(&g)).unwrap();
    assert_eq!(change_parahoric(&g, &iw, &iw).unwrap(), vec![vec![0], vec![1], vec![2]]);
    let m = change_parahoric(&g, &iw, &hyper).unwrap();
    assert_eq!(m.len(), 3);
    let mut image: Vec<usize> = m.concat();
    image.sort_unstable();
    image.dedup();
    assert_eq!(image, vec![0, 1]);
    assert!(change_parahoric(&g, &hyper, &iw).is_err());

    let g = group(RootDatum::gsp(2).unwrap());
    let types = ParahoricType::all(&g);
    let atlases: Vec<StratAtlas> = types.iter().map(|j| build_atlas(&g, &[1, 1, 1], j).unwrap()).collect();
    for fine in &atlases {
        for coarse in atlases.iter().filter(|c| fine.parahoric.is_subset(&c.parahoric)) {
            let m = change_parahoric(&g, fine, coarse).unwrap();
            let mut covered = vec![false; coarse.ekor.len()];
            for (w, image) in fine.ekor.nodes.iter().zip(&m) {
                image.iter().for_each(|&x| covered[x] = true);
                if let Some(same) = coarse.ekor.nodes.iter().find(|n| n.elt == w.elt) {
                    assert_eq!(*image, vec![same.id]);
                }
            }
            assert!(covered.iter().all(|&c| c));
        }
    }
}

#[test]
fn dot_output() {
    let g = group(RootDatum::gl(2).unwrap());
    let iw = build_atlas(&g, &[1, 0], &ParahoricType::iwahori()).unwrap();
    let dot = to_dot(&iw);
    let kr = dot.split("digraph ekor").next().unwrap();
    assert_eq!(kr.matches("[label=").count(), 3);
    assert_eq!(kr.matches(" -> ").count(), 2);
    assert_eq!(dot.matches("digraph ").count(), 3);
    assert!(kr.contains(&format!("\"{}\"", g.format(&g.translation(&[1, 0])))));
}

#[test]
fn json_round_trip_and_determinism() {
    let g = group(RootDatum::gsp(2).unwrap());
    let j = ParahoricType::hyperspecial(&g);
    let a = build_atlas(&g, &[1, 1, 1], &j).unwrap();
    let text = a.to_json();
    assert_eq!(StratAtlas::from_json(&text).unwrap(), a);
    assert_eq!(build_atlas(&g, &[1, 1, 1], &j).unwrap().to_json(), text);
    assert!(StratAtlas::from_json("{").is_err());
}

#[test]
fn cache_round_trip_and_version_check() {
    let dir = tempfile::tempdir().unwrap();
    let g = group(RootDatum::gl(2).unwrap());
    let j = ParahoricType::iwahori();
    let key = cache_key(&g, &[1, 0], &j);
    assert_eq!(key.len(), 64);
    assert_eq!(key, cache_key(&g, &[1, 0], &j));
    assert_ne!(key, cache_key(&g, &[1, 0], &ParahoricType::hyperspecial(&g)));
    assert!(cache_load(dir.path(), &key).unwrap().is_none());
    let a = build_atlas(&g, &[1, 0], &j).unwrap();
    let path = cache_store(dir.path(), &key, &a).unwrap();
    assert!(path.exists());
    assert_eq!(cache_load(dir.path(), &key).unwrap(), Some(a.clone()));

    let mut stale = a;
    stale.version = "0.0.0".into();
    cache_store(dir.path(), &key, &stale).unwrap();
    assert!(cache_load(dir.path(), &key).unwrap().is_none());

    let file = dir.path().join("not-a-dir");
    std::fs::write(&file, "x").unwrap();
    match cache_store(&file, &key, &stale) {
        Err(Error::Io { path, .. }) => assert_eq!(path, file),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}
