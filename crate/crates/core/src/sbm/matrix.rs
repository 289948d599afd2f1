/// Dense symmetric `L × L` matrix over block pairs that can gain and lose
/// blocks. Storage is square with a growable stride so that adding a block
/// is amortised O(L).
#[derive(Clone, Debug)]
pub struct SymMatrix<T> {
    dim: usize,
    stride: usize,
    data: Vec<T>,
}

impl<T: Copy + Default + PartialEq> PartialEq for SymMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && (0..self.dim).all(|a| (0..self.dim).all(|b| self.get(a, b) == other.get(a, b)))
    }
}

impl<T: Copy + Default> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        let stride = dim.max(4);
        SymMatrix {
            dim,
            stride,
            data: vec![T::default(); stride * stride],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> T {
        debug_assert!(a < self.dim && b < self.dim);
        self.data[a * self.stride + b]
    }

    #[inline]
    pub fn row(&self, a: usize) -> &[T] {
        &self.data[a * self.stride..a * self.stride + self.dim]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, v: T) {
        self.data[a * self.stride + b] = v;
        self.data[b * self.stride + a] = v;
    }

    /// Appends a zeroed block and returns its index.
    pub fn push(&mut self) -> usize {
        if self.dim == self.stride {
            let stride = self.stride * 2;
            let mut data = vec![T::default(); stride * stride];
            for a in 0..self.dim {
                data[a * stride..a * stride + self.dim].copy_from_slice(self.row(a));
            }
            self.stride = stride;
            self.data = data;
        }
        self.dim += 1;
        self.dim - 1
    }

    /// Removes block `k` by moving the last block into its slot.
    pub fn swap_remove(&mut self, k: usize) {
        let last = self.dim - 1;
        if k != last {
            for m in 0..self.dim {
                if m != k && m != last {
                    let v = self.get(last, m);
                    self.set(k, m, v);
                }
            }
            let v = self.get(last, last);
            self.set(k, k, v);
        }
        for m in 0..self.dim {
            self.set(last, m, T::default());
        }
        self.dim = last;
    }
}

impl<T> SymMatrix<T>
where
    T: Copy + Default + std::ops::AddAssign,
{
    #[inline]
    pub fn add(&mut self, a: usize, b: usize, delta: T) {
        self.data[a * self.stride + b] += delta;
        if a != b {
            self.data[b * self.stride + a] += delta;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_grows_and_swap_remove_moves_last() {
        let mut m = SymMatrix::<u64>::zeros(0);
        for _ in 0..6 {
            m.push();
        }
        for a in 0..6 {
            for b in a..6 {
                m.set(a, b, (10 * a + b) as u64);
            }
        }
        m.swap_remove(1);
        assert_eq!(m.dim(), 5);
        // old block 5 now sits at index 1
        assert_eq!(m.get(1, 1), 55);
        assert_eq!(m.get(0, 1), 5);
        assert_eq!(m.get(1, 3), 35);
        assert_eq!(m.get(2, 3), 23);
        let k = m.push();
        assert_eq!(k, 5);
        assert_eq!(m.row(5), &[0, 0, 0, 0, 0, 0]);
    }
}
