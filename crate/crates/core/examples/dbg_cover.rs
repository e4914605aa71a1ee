use curveglue_core::factor;
use curveglue_core::field::Field;
use curveglue_core::kummer::*;
use curveglue_core::poly::Poly;
use curveglue_core::tower::common_splitting_tower;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k = Field::prime(101).unwrap();
    let f = Poly::from_i64(&k, &[0, -18, 9, 20, -10, -2, 1]);
    let ks = kummer_surface(&f, &mut rng).unwrap();
    let q_y = Poly::from_i64(&k, &[-3, 2, 1]);
    let p2 = datum_node(&ks.fc, &q_y, false).unwrap();
    let p1 = [k.zero(), k.zero(), k.zero(), k.one()];
    let pencil = plane_pencil(&ks.quartic, &p1, &p2).unwrap();
    for lam in [7i64, 11, 23, 35] {
        let sec = match pencil.section(&k.from_i64(lam)) { Ok(s) => s, Err(e) => { println!("lam {lam}: section {e:?}"); continue } };
        let data = match branch_slopes(&sec, &mut rng) { Ok(d) => d, Err(e) => { println!("lam {lam}: slopes {e:?}"); continue } };
        let cs0 = data.c.mul(&data.s.eval(&k.zero()));
        let aux = Poly::new(&k, vec![cs0.neg(), k.zero(), k.one()]);
        let (tower, roots) = common_splitting_tower(&[data.s.clone(), data.q0.clone(), aux], &mut rng).unwrap();
        let slopes = &roots[0];
        let qmus = &roots[1];
        let w0 = roots[2][0].clone();
        let s_emb = tower.embed_poly(&data.s).unwrap();
        let cpoly = s_emb.scale(&tower.embed(&data.c).unwrap());
        let q1 = tower.embed_poly(&data.q1).unwrap();
        let r = tower.embed_poly(&data.r).unwrap();
        let mut ram = vec![];
        for mu in qmus {
            let w = q1.eval(mu).div(&r.eval(mu)).unwrap();
            assert_eq!(w.mul(&w), cpoly.eval(mu));
            ram.push((mu.clone(), w));
        }
        ram.push((tower.field().zero(), w0.clone()));
        ram.push((tower.field().zero(), w0.neg()));
        let cm = cubic_model(&cpoly, &slopes[0]).unwrap();
        let mut acc = None;
        for (mu, w) in &ram {
            let p = cm.map(mu, w).unwrap();
            assert!(cm.e.contains(&p), "not on curve");
            acc = cm.e.add(&acc, &p).unwrap();
        }
        println!("lam {lam}: tower deg {}  sum phi(B) = {:?}", tower.field().degree(), acc.as_ref().map(|_| "nonzero").unwrap_or("O"));
        if let Some(pt) = &acc {
            let d = cm.e.add(&acc, &acc).unwrap();
            println!("   doubled sum is O: {}   sum = ({:?}, {:?})", d.is_none(), pt.0, pt.1);
        }
        // variant: flip Q2 sheet
        let mut acc2 = None;
        for (i, (mu, w)) in ram.iter().enumerate() {
            let ww = if i == 1 { w.neg() } else { w.clone() };
            acc2 = cm.e.add(&acc2, &cm.map(mu, &ww).unwrap()).unwrap();
        }
        println!("   with Q2 flipped: {}", if acc2.is_none() { "O" } else { "nonzero" });
        // tangency-point classes: phi sum of the four Weierstrass pts is O by construction
        let _ = factor::roots(&data.q0, &mut rng);
    }
}
