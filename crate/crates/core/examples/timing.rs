use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use orbicat::category::*;
use orbicat::corpus;
use orbicat::groupoid::TranslationGroupoid;
use orbicat::models;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut agree = 0;
    let mut disagree = Vec::new();
    let mut grd_agree = 0;
    let mut grd_disagree = 0;
    let mut pairs = Vec::new();
    for _ in 0..26 {
        let space = corpus::random_action(&mut rng, 6, 10);
        let gpd = TranslationGroupoid::new(space);
        let eq = corpus::random_essential_equivalence(&mut rng, &gpd, 6, 16);
        pairs.push(eq);
    }
    // named circle pairs
    for n in [2usize, 4] {
        let gpd = TranslationGroupoid::new(models::rotation_circle(n));
        let l = gpd.group().subgroup(&(0..n).collect::<Vec<_>>()).unwrap();
        pairs.push(orbicat::groupoid::build_quotient_equivalence(&gpd, &l).unwrap());
    }
    {
        let gpd = TranslationGroupoid::new(models::rotation_circle(4));
        let l = gpd.group().subgroup(&[0, 2]).unwrap();
        pairs.push(orbicat::groupoid::build_quotient_equivalence(&gpd, &l).unwrap());
        let swap = TranslationGroupoid::new(models::swap_two_points());
        let l2 = swap.group().subgroup(&[0, 1]).unwrap();
        pairs.push(orbicat::groupoid::build_quotient_equivalence(&swap, &l2).unwrap());
    }
    for eq in &pairs {
        let a = eq.map().src().clone();
        let b = eq.map().dst().clone();
        let ca = cat_g(&a.space, DEFAULT_OPENS_BUDGET).unwrap().value;
        let cb = cat_g(&b.space, DEFAULT_OPENS_BUDGET).unwrap().value;
        if ca == cb { agree += 1; } else { disagree.push((a.group().order(), a.points(), format!("{ca:?} vs {cb:?}"))); }
        let ga = cat_grd(&a, DEFAULT_OPENS_BUDGET).unwrap().value;
        let gb = cat_grd(&b, DEFAULT_OPENS_BUDGET).unwrap().value;
        if ga == gb { grd_agree += 1; } else { grd_disagree += 1; }
    }
    println!("pairs: {} | cat_G agree {} disagree {:?}", pairs.len(), agree, disagree);
    println!("cat_grd agree {} disagree {}", grd_agree, grd_disagree);
    println!("elapsed {:?}", t0.elapsed());
}
