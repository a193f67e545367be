//! Permutations of `{0, .., n-1}` in one-line notation: `w[i]` is the image of `i`.

pub type Perm = Vec<u8>;

pub fn id(n: usize) -> Perm {
    (0..n as u8).collect()
}

pub fn is_id(w: &[u8]) -> bool {
    w.iter().enumerate().all(|(i, &x)| i == x as usize)
}

/// `(v w)(i) = v(w(i))`.
pub fn compose(v: &[u8], w: &[u8]) -> Perm {
    w.iter().map(|&x| v[x as usize]).collect()
}

pub fn inv(w: &[u8]) -> Perm {
    let mut out = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

pub fn length(w: &[u8]) -> usize {
    let mut l = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                l += 1;
            }
        }
    }
    l
}

/// `w s_i` (0-based `i`, swapping positions `i`, `i+1`).
pub fn times_s(w: &[u8], i: usize) -> Perm {
    let mut out = w.to_vec();
    out.swap(i, i + 1);
    out
}

/// `s_i w`.
pub fn s_times(i: usize, w: &[u8]) -> Perm {
    w.iter()
        .map(|&x| {
            if x as usize == i {
                (i + 1) as u8
            } else if x as usize == i + 1 {
                i as u8
            } else {
                x
            }
        })
        .collect()
}

/// `l(w s_i) < l(w)`.
pub fn is_right_descent(w: &[u8], i: usize) -> bool {
    w[i] > w[i + 1]
}

/// `l(s_i w) < l(w)`.
pub fn is_left_descent(w: &[u8], i: usize) -> bool {
    let wi = inv(w);
    wi[i] > wi[i + 1]
}

/// A reduced word `[i_1, .., i_k]` with `w = s_{i_1} .. s_{i_k}`, built by
/// repeatedly stripping the smallest left descent.
pub fn reduced_word(w: &[u8]) -> Vec<usize> {
    let mut word = Vec::new();
    let mut cur = w.to_vec();
    while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| is_left_descent(&cur, i)) {
        word.push(i);
        cur = s_times(i, &cur);
    }
    word
}

pub fn from_word(n: usize, word: &[usize]) -> Perm {
    let mut w = id(n);
    for &i in word {
        w = times_s(&w, i);
    }
    w
}

/// All permutations of `n` in lexicographic order of one-line notation.
pub fn all(n: usize) -> Vec<Perm> {
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_words_have_length() {
        for n in 1..=4 {
            for w in all(n) {
                let word = reduced_word(&w);
                assert_eq!(word.len(), length(&w));
                assert_eq!(from_word(n, &word), w);
            }
        }
    }

    #[test]
    fn descents() {
        let w: Perm = vec![1, 0, 2];
        assert!(is_right_descent(&w, 0));
        assert!(!is_right_descent(&w, 1));
        assert_eq!(compose(&w, &inv(&w)), id(3));
        assert_eq!(times_s(&id(3), 1), s_times(1, &id(3)));
    }
}
