"""Programs over monoids, Γ-programs and the reductions built from them."""

from .compress import (compress_equivalent, compress_subword_indices, compression_constant,
                       equivalent_length_bound, random_program, subword_index_bound,
                       summed_length_bound)
from .core import (CombinedProgram, GammaProgram, Instruction, Program, ProgramError, all_words_array,
                   boolean_combine, compose_gamma, compose_reduction, dfa_program, encode_words, eval_program,
                   eval_trace, gamma_eval, morphism_program, prefix_program, program_from_json, recognizes,
                   suffix_program)
from .selector import (SelectorFn, selector_alphabet, selector_length_bound, selector_member, selector_program,
                       zk_language)
from .sweep import (DecoratedSweepPlan, decorate_word, decorated_sweep, feedback_sweep, modular_decoration,
                    sweep_length, sweep_source_language, sweep_target_language)
from .tddo import compile_tddo
