//! Types of the calculus and their orders.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The seven base types.
///
/// `e` terms, `a` atoms, `l` literals, `g` gen-literals, `d` conjunctions of
/// gen-literals (rule bodies), `h` disjunctions of literals (rule heads) and
/// `t` truth values of programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseType {
    E,
    A,
    L,
    G,
    D,
    H,
    T,
}

impl BaseType {
    pub const ALL: [BaseType; 7] = [
        BaseType::E,
        BaseType::A,
        BaseType::L,
        BaseType::G,
        BaseType::D,
        BaseType::H,
        BaseType::T,
    ];

    pub fn letter(self) -> char {
        match self {
            BaseType::E => 'e',
            BaseType::A => 'a',
            BaseType::L => 'l',
            BaseType::G => 'g',
            BaseType::D => 'd',
            BaseType::H => 'h',
            BaseType::T => 't',
        }
    }

    pub fn from_letter(c: char) -> Option<BaseType> {
        BaseType::ALL.into_iter().find(|b| b.letter() == c)
    }

    /// Coercion order on non-arrow terms: `a ⊑ l ⊑ g ⊑ d` and `l ⊑ h`.
    /// `e` and `t` are only related to themselves.
    pub fn coerces_to(self, other: BaseType) -> bool {
        use BaseType::*;
        if self == other {
            return true;
        }
        matches!(
            (self, other),
            (A, L) | (A, G) | (A, D) | (A, H) | (L, G) | (L, D) | (L, H) | (G, D)
        )
    }

    /// Greatest lower bound in the coercion order, if any.
    pub fn meet(self, other: BaseType) -> Option<BaseType> {
        BaseType::ALL
            .into_iter()
            .filter(|c| c.coerces_to(self) && c.coerces_to(other))
            .find(|c| {
                BaseType::ALL
                    .into_iter()
                    .filter(|x| x.coerces_to(self) && x.coerces_to(other))
                    .all(|x| x.coerces_to(*c))
            })
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base(BaseType),
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn base(b: BaseType) -> Type {
        Type::Base(b)
    }

    pub fn arrow(input: Type, output: Type) -> Type {
        Type::Arrow(Box::new(input), Box::new(output))
    }

    /// Builds `t1 -> t2 -> ... -> result`.
    pub fn arrows(inputs: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let inputs: Vec<Type> = inputs.into_iter().collect();
        inputs
            .into_iter()
            .rev()
            .fold(result, |acc, input| Type::arrow(input, acc))
    }

    /// Order of a type: 0 for base types, `max(order(a) + 1, order(b))` for `a -> b`.
    pub fn order(&self) -> usize {
        match self {
            Type::Base(_) => 0,
            Type::Arrow(a, b) => (a.order() + 1).max(b.order()),
        }
    }

    pub fn as_base(&self) -> Option<BaseType> {
        match self {
            Type::Base(b) => Some(*b),
            Type::Arrow(..) => None,
        }
    }

    /// Splits `t1 -> ... -> tn -> r` into `([t1..tn], r)` with `r` a base type.
    pub fn uncurry(&self) -> (Vec<&Type>, BaseType) {
        let mut inputs = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Type::Base(b) => return (inputs, *b),
                Type::Arrow(a, b) => {
                    inputs.push(a.as_ref());
                    cur = b;
                }
            }
        }
    }

    /// Number of base-type leaves.
    pub fn leaves(&self) -> usize {
        match self {
            Type::Base(_) => 1,
            Type::Arrow(a, b) => a.leaves() + b.leaves(),
        }
    }
}

/// Free function form of [`Type::order`].
pub fn order(ty: &Type) -> usize {
    ty.order()
}

impl From<BaseType> for Type {
    fn from(b: BaseType) -> Self {
        Type::Base(b)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(b) => write!(f, "{b}"),
            Type::Arrow(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}
