use crate::bits::Bits;
use crate::machines::Nat;

/// A bijection `(σ, k) ↦ ⟨σ, k⟩` between strings paired with naturals and the
/// naturals.  The column `ℕ^[σ]` is `{⟨σ, k⟩ : k ∈ ℕ}`.
pub trait ColumnPairing: Send + Sync {
    fn pair(&self, sigma: &Bits, k: Nat) -> Nat;
    /// `None` for naturals beyond the supported range.
    fn unpair(&self, n: Nat) -> Option<(Bits, Nat)>;
}

/// Pairs ordered by the diagonal `d = |σ| + k`, then by `|σ|`, then by the
/// value of `σ` read as a binary numeral.
///
/// `⟨σ, k⟩ = 2^{d+1} − 2 − d + 2^{|σ|} − 1 + val(σ)`, and `⟨σ, k⟩ ≥ |σ|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiagonalPairing;

fn diagonal_base(d: u32) -> Nat {
    (1 << (d + 1)) - 2 - d as Nat
}

impl ColumnPairing for DiagonalPairing {
    /// Panics when the diagonal exceeds 125.
    fn pair(&self, sigma: &Bits, k: Nat) -> Nat {
        let d = sigma.len() as Nat + k;
        assert!(d <= 125, "pair ⟨{sigma}, {k}⟩ does not fit in 128 bits");
        diagonal_base(d as u32) + (1 << sigma.len()) - 1 + sigma.value()
    }

    fn unpair(&self, n: Nat) -> Option<(Bits, Nat)> {
        let mut d = 0u32;
        while diagonal_base(d + 1) <= n {
            d += 1;
            if d > 125 {
                return None;
            }
        }
        let r = n - diagonal_base(d);
        let len = (r + 1).ilog2();
        let val = r - ((1 << len) - 1);
        Some((Bits::from_value(val, len as usize), (d - len) as Nat))
    }
}
