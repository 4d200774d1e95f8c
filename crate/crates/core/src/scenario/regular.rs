use std::sync::Arc;

use super::space::GroupSpace;
use crate::fq::Elem;
use crate::group::{GroupLaw, GroupTable};

/// A group acting on its own elements by left multiplication.
pub struct RegularSpace {
    pub table: Arc<GroupTable>,
}

impl RegularSpace {
    pub fn new(table: Arc<GroupTable>) -> RegularSpace {
        RegularSpace { table }
    }
}

impl GroupSpace for RegularSpace {
    fn law(&self) -> &Arc<GroupLaw> {
        self.table.law()
    }

    fn len(&self) -> usize {
        self.table.order()
    }

    fn act(&self, g: &[Elem], x: usize) -> usize {
        let gi = self.table.index_of(g).expect("acting element lies in the table");
        self.table.mul_idx(gi, x)
    }

    fn fixed_points(&self, g: &[Elem]) -> u64 {
        if self.table.law().is_identity(g) {
            self.len() as u64
        } else {
            0
        }
    }

    fn describe(&self) -> String {
        format!("regular action of {}", self.table.descriptor())
    }
}
