"""wqsim: coherent-feedback dynamics of atoms coupled to a mirror-terminated
waveguide, in the frequency (mode) and spatial (wave-packet) pictures."""
import os as _os

# Cap BLAS/OpenMP pools before numpy loads; WQSIM_THREADS limits the
# data-parallel width of the mode-space linear algebra.
_cap = _os.environ.get("WQSIM_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)

__version__ = "0.1.0"

from .errors import (InvalidCoupling, InvalidFrequency, InvalidGeometry,
                     InvalidGrid, MissingOrigin, NonFiniteState,
                     OutOfRange, OutsideMarkovRegimeWarning, ParseError,
                     StepTooLarge, UnknownPreset, WqsimError)
from .model import (AtomParams, KGrid, NetworkConfig, coupling_g,
                    default_kgrid, validate_config)
from .dde import DelaySystem, HistoryBuffer, Trajectory, integrate, sample
from .frequency import (OracleResult, SpectralPairResult, SteadyStateClass,
                        SteadyStateLabel, TwoExcitationState,
                        analytic_cee_markov, classify_steady_state,
                        oracle_full_grid, populations, solve_cee,
                        solve_spectral_pair, solve_two_photon, total_norm,
                        two_photon_norm)
from .spatial import (Direction, FieldSnapshot, SegmentedPacket,
                      check_mirror_boundary, eval_single_atom_field,
                      eval_two_atom_field, field_snapshot, packets_for,
                      single_atom_packets, single_excitation_norm,
                      solve_single_atom, solve_two_atom_single_excitation,
                      two_atom_packets)
from .presets import PRESETS, Preset, get_preset, run_pipeline, run_preset
from .runio import (RunSettings, format_config, parse_config_file,
                    parse_config_text, write_csv, write_manifest)
from .verify import VerificationCheck, VerificationReport, verify

__all__ = [name for name in dir() if not name.startswith("_")]
