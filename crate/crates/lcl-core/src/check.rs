use graph_core::{Configuration, Graph};

use crate::{LclError, LclSpec};

/// Whether decided element `x` (node slot or edge index) is content.
pub fn is_content(lcl: &LclSpec, g: &Graph, c: &Configuration, x: usize) -> Result<bool, LclError> {
    let o = c.get(x).ok_or(LclError::UndecidedElement(x))?;
    Ok(lcl.holds(o, &c.neighbor_multiset(g, x, lcl.alphabet())))
}

/// Γ(C): the content elements.
pub fn content_set(lcl: &LclSpec, g: &Graph, c: &Configuration) -> Vec<usize> {
    c.decided(g).into_iter().filter(|&x| is_content(lcl, g, c, x).expect("decided")).collect()
}

/// Decided elements that are not content.
pub fn uncontent(lcl: &LclSpec, g: &Graph, c: &Configuration) -> Vec<usize> {
    c.decided(g).into_iter().filter(|&x| !is_content(lcl, g, c, x).expect("decided")).collect()
}

/// Every decided element is content.
pub fn is_strong(lcl: &LclSpec, g: &Graph, c: &Configuration) -> bool {
    c.domain(g).all(|x| c.get(x).is_none() || is_content(lcl, g, c, x).expect("decided"))
}

/// Complete and every element content.
pub fn is_legal(lcl: &LclSpec, g: &Graph, c: &Configuration) -> bool {
    c.is_complete(g) && is_strong(lcl, g, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{IN, OUT};
    use graph_core::Label;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(&edges, 2).unwrap()
    }

    #[test]
    fn content_examples() {
        let lcl = LclSpec::mis();
        let g = Graph::from_edges(&[(0, 1), (0, 2)], 2).unwrap();
        let c = Configuration::node(vec![Some(IN), Some(OUT), Some(OUT)]);
        assert!(is_content(&lcl, &g, &c, 0).unwrap());
        let c = Configuration::node(vec![None, Some(OUT), None]);
        assert!(!is_content(&lcl, &g, &c, 1).unwrap());
        assert_eq!(is_content(&lcl, &g, &c, 0), Err(LclError::UndecidedElement(0)));
        let lone = Graph::empty(1, 1).unwrap();
        assert!(is_content(&lcl, &lone, &Configuration::node(vec![Some(IN)]), 0).unwrap());
    }

    #[test]
    fn legality_examples() {
        let lcl = LclSpec::mis();
        let c5 = cycle(5);
        let good = Configuration::node(vec![Some(IN), Some(OUT), Some(IN), Some(OUT), Some(OUT)]);
        assert!(is_legal(&lcl, &c5, &good));
        let mut partial = good.clone();
        partial.set(4, None);
        assert!(!is_legal(&lcl, &c5, &partial));
        assert!(is_strong(&lcl, &c5, &partial));
        let e = Graph::from_edges(&[(0, 1)], 1).unwrap();
        assert!(!is_legal(&lcl, &e, &Configuration::node(vec![Some(IN), Some(IN)])));
    }

    #[test]
    fn edge_legality() {
        let lcl = LclSpec::maximal_matching();
        let p = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)], 2).unwrap();
        let c = Configuration::edge(vec![Some(Label(2)), Some(Label(1)), Some(Label(2))]);
        assert!(is_legal(&lcl, &p, &c));
        let bad = Configuration::edge(vec![Some(Label(1)), Some(Label(2)), Some(Label(2))]);
        assert_eq!(uncontent(&lcl, &p, &bad), vec![2]);
    }
}
