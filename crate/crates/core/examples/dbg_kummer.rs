use curveglue_core::*;
use curveglue_core::kummer::*;
use curveglue_core::poly::Poly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k = Field::prime(101).unwrap();
    let f = Poly::from_i64(&k, &[0, -18, 9, 20, -10, -2, 1]);
    let ks = kummer_surface(&f, &mut rng).unwrap();
    let r = k.one(); let s = k.from_i64(-3);
    let sum = r.add(&s); let prod = r.mul(&s);
    // node (1 : -2 : -3 : k4)
    let node = ks.nodes.iter().find(|n| n[0].is_one() && n[1] == sum && n[2] == prod).unwrap().clone();
    println!("p2 = {:?}", node);
    let p1 = [k.zero(), k.zero(), k.zero(), k.one()];
    let pencil = plane_pencil(&ks.quartic, &p1, &node).unwrap();
    println!("l1={:?} l2={:?}", pencil.l1, pencil.l2);
    for l in [3i64, 7, 11] {
        let lam = k.from_i64(l);
        match pencil.section(&lam) {
            Err(e) => println!("lam={l}: section err {e:?}"),
            Ok(sec) => {
                // recompute D
                let mut cs = vec![vec![k.zero();5];5];
                for (e, c) in sec.curve.terms() {
                    let (a,b) = (e[0] as usize, e[1] as usize);
                    cs[a+b][b] = cs[a+b][b].add(c);
                }
                let cp: Vec<Poly> = cs.iter().map(|v| Poly::new(&k, v.clone())).collect();
                let d = cp[3].mul(&cp[3]).sub(&cp[4].mul(&cp[2]).scale(&k.from_i64(4)));
                println!("lam={l}: deg q0={:?} q1={:?} q2={:?} degD={:?}", cp[2].degree(), cp[3].degree(), cp[4].degree(), d.degree());
                let fac = factor::factor(&d, &mut rng).unwrap();
                for (g,m) in &fac.factors { println!("   factor deg {} mult {} : {:?}", g.deg(), m, g.coeffs().iter().map(|c| c.as_fp().unwrap()).collect::<Vec<_>>()); }
            }
        }
    }
}
