//! Everything computed for one complex over one field, in dependency order.

use crate::field::Field;
use crate::koszul::{HochsterBasis, KoszulComplex};
use crate::resolution::{self, ResolutionModel};
use crate::simplicial::SimplicialComplex;
use crate::transfer::{self, OperationTable, RetractionChoice};

pub struct MomentAngle<F: Field> {
    pub field: F,
    pub complex: SimplicialComplex,
    pub koszul: KoszulComplex<F::Elem>,
    pub hochster: HochsterBasis<F::Elem>,
    pub table: OperationTable<F::Elem>,
    pub model: ResolutionModel<F::Elem>,
}

impl<F: Field> MomentAngle<F> {
    pub fn new(k: &SimplicialComplex, f: F) -> Self {
        Self::with_choice(k, f, RetractionChoice::Standard)
    }

    pub fn with_choice(k: &SimplicialComplex, f: F, choice: RetractionChoice) -> Self {
        let koszul = KoszulComplex::build(k, &f);
        let retraction = transfer::build_retraction(&koszul, choice, &f);
        let hochster = HochsterBasis::new(&koszul, retraction.strands, &f);
        let table = transfer::operation_table(&koszul, &hochster, &f);
        let model = resolution::assemble(&table, &hochster, &f);
        MomentAngle { field: f, complex: k.clone(), koszul, hochster, table, model }
    }
}
