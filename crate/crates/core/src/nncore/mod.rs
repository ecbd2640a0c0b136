//! Dense kernels with analytic backward passes.

mod activation;
mod adam;
mod attention;
mod dropout;
mod huber;
mod linear;
mod softmax;

pub use activation::{relu, relu_backward, sigmoid, sigmoid_backward, tanh, tanh_backward};
pub use adam::{adam_step, AdamConfig, AdamState};
pub use attention::{attention_backward, attention_forward, AttentionCache, AttentionParams};
pub use dropout::{dropout, dropout_backward, DropoutMask};
pub use huber::{huber_loss, HuberConfig};
pub use linear::{glorot_uniform, linear_backward, linear_forward, LinearCache, LinearParams};
pub use softmax::{softmax_rows, softmax_rows_backward};

use ndarray::{ArrayViewD, ArrayViewMutD};

/// A named, ordered collection of trainable tensors.
///
/// Both methods must yield tensors in the same order with the same names;
/// optimizers and serializers rely on it.
pub trait Parameters {
    fn tensors(&self) -> Vec<(String, ArrayViewD<'_, f64>)>;
    fn tensors_mut(&mut self) -> Vec<(String, ArrayViewMutD<'_, f64>)>;

    fn num_scalars(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }
}
