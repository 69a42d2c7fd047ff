//! Small combinatorial enumerators with deterministic output order.

/// All permutations of `items`, in lexicographic order of the resulting sequences.
pub fn permutations<T: Clone + Ord>(items: &[T]) -> Vec<Vec<T>> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut cur = Vec::with_capacity(sorted.len());
    fn rec<T: Clone>(
        sorted: &[T],
        used: &mut [bool],
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if cur.len() == sorted.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..sorted.len() {
            if !used[i] {
                used[i] = true;
                cur.push(sorted[i].clone());
                rec(sorted, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(&sorted, &mut used, &mut cur, &mut out);
    out
}

/// Set partitions of `items` into nonempty blocks. Blocks are emitted with
/// their elements sorted, blocks ordered by least element, and partitions in
/// the order induced by restricted-growth assignment (element 0 always opens
/// the first block).
pub fn set_partitions<T: Clone + Ord>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    let n = sorted.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    // restricted growth strings
    let mut rgs = vec![0usize; n];
    fn rec<T: Clone>(sorted: &[T], rgs: &mut Vec<usize>, pos: usize, maxb: usize, out: &mut Vec<Vec<Vec<T>>>) {
        let n = sorted.len();
        if pos == n {
            let nb = maxb + 1;
            let mut blocks: Vec<Vec<T>> = vec![Vec::new(); nb];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(sorted[i].clone());
            }
            out.push(blocks);
            return;
        }
        for b in 0..=maxb + 1 {
            rgs[pos] = b;
            rec(sorted, rgs, pos + 1, maxb.max(b), out);
        }
    }
    rec(&sorted, &mut rgs, 1, 0, &mut out);
    out
}

/// All subsets of `items`, ordered by size then lexicographically.
pub fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<Vec<T>> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    let n = sorted.len();
    let mut out: Vec<Vec<T>> = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let mut s = Vec::new();
        for (i, it) in sorted.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s.push(it.clone());
            }
        }
        out.push(s);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Perfect matchings of `items` (even cardinality) as lists of pairs (lo, hi),
/// pairs sorted by their first element.
pub fn perfect_matchings<T: Clone + Ord>(items: &[T]) -> Vec<Vec<(T, T)>> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    if sorted.len() % 2 != 0 {
        return out;
    }
    fn rec<T: Clone + Ord>(rest: &[T], cur: &mut Vec<(T, T)>, out: &mut Vec<Vec<(T, T)>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = rest[0].clone();
        for j in 1..rest.len() {
            let partner = rest[j].clone();
            let mut remaining: Vec<T> = Vec::with_capacity(rest.len() - 2);
            for (k, item) in rest.iter().enumerate() {
                if k != 0 && k != j {
                    remaining.push(item.clone());
                }
            }
            cur.push((first.clone(), partner));
            rec(&remaining, cur, out);
            cur.pop();
        }
    }
    rec(&sorted, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing index tuples of length `k` from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
