use std::sync::Arc;

use super::{eliminate, GbCaps, Ideal, Polynomial, VarTable};
use crate::error::{Error, Result};

/// Ring homomorphism from a polynomial ring into a Laurent polynomial ring.
///
/// The target is an ordinary polynomial ring in which each pair `(t, u)` of
/// `laurent_pairs` models `u = t^{-1}`; images are kept with those pairs
/// cancelled.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Arc<VarTable>,
    target: Arc<VarTable>,
    images: Vec<Polynomial>,
    laurent_pairs: Vec<(usize, usize)>,
}

impl RingMap {
    pub fn new(
        source: Arc<VarTable>,
        target: Arc<VarTable>,
        images: Vec<Polynomial>,
        laurent_pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::InvalidInput(format!(
                "ring map needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        if images.iter().any(|p| p.nvars() != target.len()) {
            return Err(Error::InvalidInput("image outside the target ring".into()));
        }
        let images = images
            .into_iter()
            .map(|p| p.laurent_cancel(&laurent_pairs))
            .collect();
        Ok(Self {
            source,
            target,
            images,
            laurent_pairs,
        })
    }

    pub fn source(&self) -> &Arc<VarTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarTable> {
        &self.target
    }

    pub fn image_of_var(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    pub fn image_of(&self, name: &str) -> Result<&Polynomial> {
        Ok(&self.images[self.source.require(name)?])
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn laurent_pairs(&self) -> &[(usize, usize)] {
        &self.laurent_pairs
    }

    /// Replaces the image of one variable; used to build perturbed maps.
    pub fn with_image(mut self, i: usize, p: Polynomial) -> Self {
        self.images[i] = p.laurent_cancel(&self.laurent_pairs);
        self
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        f.substitute(&self.images, self.target.len())
            .laurent_cancel(&self.laurent_pairs)
    }

    /// Graph ideal in the ring `target ⊗ source` (target variables first):
    /// `x - φ(x)` for every source variable and `t u - 1` for every pair.
    pub fn graph_ideal(&self) -> Result<(Arc<VarTable>, Ideal)> {
        let nt = self.target.len();
        let ns = self.source.len();
        let names = self
            .target
            .names()
            .iter()
            .chain(self.source.names())
            .cloned();
        let table = VarTable::new(names)?;
        let n = nt + ns;
        let to_combined: Vec<usize> = (0..nt).collect();
        let mut gens = Vec::with_capacity(ns + self.laurent_pairs.len());
        for (i, img) in self.images.iter().enumerate() {
            let x = Polynomial::var(n, nt + i);
            gens.push(&x - &img.rename(&to_combined, n));
        }
        for &(t, u) in &self.laurent_pairs {
            let tu = &Polynomial::var(n, t) * &Polynomial::var(n, u);
            gens.push(&tu - &Polynomial::one(n));
        }
        Ok((table, Ideal::new(n, gens)?))
    }

    /// Kernel by elimination of the target variables from the graph ideal,
    /// returned in the source ring.
    pub fn kernel(&self, caps: GbCaps) -> Result<Ideal> {
        let (_, g) = self.graph_ideal()?;
        let nt = self.target.len();
        let ns = self.source.len();
        let drop: Vec<usize> = (0..nt).collect();
        let e = eliminate(&g, &drop, caps)?;
        let keep: Vec<usize> = (nt..nt + ns).collect();
        let gens = e
            .gens()
            .iter()
            .map(|p| p.restrict(&keep).expect("eliminated variable survived"))
            .collect();
        Ideal::new(ns, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ideal_equal, TermOrder};

    #[test]
    fn kernel_of_twisted_cubic_parametrization() {
        // a -> s^2, b -> s t, c -> t^2; kernel is <a c - b^2>
        let src = VarTable::new(["a", "b", "c"]).unwrap();
        let tgt = VarTable::new(["s", "t"]).unwrap();
        let s = Polynomial::var(2, 0);
        let t = Polynomial::var(2, 1);
        let phi = RingMap::new(src, tgt, vec![&s * &s, &s * &t, &t * &t], vec![]).unwrap();
        let k = phi.kernel(GbCaps::default()).unwrap();
        let v: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(3, i)).collect();
        let expect = Ideal::new(3, vec![&(&v[0] * &v[2]) - &(&v[1] * &v[1])]).unwrap();
        assert!(ideal_equal(&k, &expect, &TermOrder::grevlex(3), GbCaps::default()).unwrap());
    }

    #[test]
    fn laurent_images_cancel() {
        // x -> t^{-1}, y -> t; x*y -> 1
        let src = VarTable::new(["x", "y"]).unwrap();
        let tgt = VarTable::new(["t", "u"]).unwrap();
        let t = Polynomial::var(2, 0);
        let u = Polynomial::var(2, 1);
        let phi = RingMap::new(src, tgt, vec![u, t], vec![(0, 1)]).unwrap();
        let xy = &Polynomial::var(2, 0) * &Polynomial::var(2, 1);
        assert_eq!(phi.apply(&xy), Polynomial::one(2));
        let k = phi.kernel(GbCaps::default()).unwrap();
        let one = Polynomial::one(2);
        let expect = Ideal::new(2, vec![&xy - &one]).unwrap();
        assert!(ideal_equal(&k, &expect, &TermOrder::grevlex(2), GbCaps::default()).unwrap());
    }
}
