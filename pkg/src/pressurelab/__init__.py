"""Topological pressure of subsets of subshifts of finite type.

Pressure is estimated from covers by Bowen balls, mistake Bowen balls,
average-metric balls and open-cover strings, and checked against a
transfer-matrix oracle.
"""
from .balls import (avg_contains, ball_word_census, bowen_contains, inclusion_chain_check,
                    lemma_check, mistake_contains)
from .errors import (CensusTooLarge, ConfigError, InstanceTooLarge, MonotonicityViolation,
                     NotIrreducible, PressureLabError, UnalignedRadius)
from .io import load_potential, load_system
from .mistake import MistakeFunction, eval_budget, validate
from .oracles import naive_m_infimum, transfer_pressure, transfer_spectrum, word_count_pressure
from .pressure_ball import (PressureEstimate, TracePoint, critical_value, m_estimate,
                            pressure_estimate)
from .pressure_cover import (CylinderCover, StringU, cover_pressure, m_prime,
                             stirling_bound, stirling_gamma, string_trace_set,
                             substitution_count, substitutions)
from .symbolic import (GeometricSeries, LocallyConstant, Point, SftSystem, birkhoff_sum,
                       distance, enumerate_words, modulus_of_continuity, shift)
from .zset import CylinderUnion, SubSft, WholeSpace, parse_z

__version__ = "0.1.0"
