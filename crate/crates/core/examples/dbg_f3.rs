use curveglue_core::field::Field;
use curveglue_core::kummer::*;
use curveglue_core::poly::Poly;
use curveglue_core::twotorsion::rational_gluing_data;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let f3 = Field::prime(3).unwrap();
    let p_x = Poly::from_i64(&f3, &[1, 1, 0, 2, 1]);
    let p_y = Poly::from_i64(&f3, &[1, 2, 1, 1, 1, 0, 2]);
    let data = rational_gluing_data(&p_x, &p_y, &mut rng).unwrap();
    for (di, d) in data.iter().enumerate() {
        println!("== datum {di}");
        match kummer_glue_all(&p_x, &p_y, d, &mut rng) {
            Ok(res) => {
                for g in &res {
                    println!("  lam={:?} cover={} descended={} mu=({:?},{:?})\n    z={:?}",
                        g.lambda, g.cover_index, g.descended, g.mu_x, g.mu_y, g.z.mpoly());
                }
            }
            Err(e) => println!("  ERR {e:?}"),
        }
    }
}
