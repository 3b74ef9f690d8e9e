use crate::C64;

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: C64,
    comp: C64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, x: C64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> C64 {
        self.sum
    }
}

/// Sums chunk totals in order with compensation.
pub(crate) fn kahan_total(parts: impl IntoIterator<Item = C64>) -> C64 {
    let mut k = KahanSum::default();
    for p in parts {
        k.add(p);
    }
    k.value()
}
