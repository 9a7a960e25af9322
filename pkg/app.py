import traceback

import pandas as pd
import streamlit as st

from gendrv.data_exporter import DataExporter
from gendrv.derivator import Backend
from gendrv.errors import GendrvError
from gendrv.solvers import EXTREMUM_METHODS, Direction, Method, SolverConfig
from gendrv.sweep_runner import (
    EXTREMUM_SWEEP, ROOT_SWEEP, SweepSpec, classify_limits, compare_methods, records_frame,
    run_sweep, stats_frame, summarize,
)
from gendrv.target import resolve

# Page configuration
st.set_page_config(
    page_title="Generalized Derivative Solver Bench",
    layout="wide",
    initial_sidebar_state="expanded"
)

# Initialize session state
if 'records' not in st.session_state:
    st.session_state.records = None
if 'stats' not in st.session_state:
    st.session_state.stats = None
if 'spec' not in st.session_state:
    st.session_state.spec = None

PRESETS = {
    "Root finding (L-NR vs C-NR)": ROOT_SWEEP,
    "Extremum finding (L-G vs Q-G)": EXTREMUM_SWEEP,
}


def main():
    st.title("Generalized Derivative Solver Bench")
    st.caption("Iteration-count comparison of derivator-based root and extremum finders")

    # Sidebar for parameters and controls
    with st.sidebar:
        st.header("Configuration")

        function_text = st.text_input(
            "Function",
            value="builtin:quartic-y",
            help="Expression in x (e.g. x^3 - 2*x - 5) or builtin:quartic-y"
        )

        preset_name = st.selectbox("Preset", list(PRESETS))
        preset = PRESETS[preset_name]

        methods = st.multiselect(
            "Methods",
            options=[m.value for m in Method],
            default=[m.value for m in preset["methods"]],
        )

        st.subheader("Initial guesses")
        x0_start = st.number_input("Start", value=float(preset["x0_start"]))
        x0_end = st.number_input("End", value=float(preset["x0_end"]))
        x0_count = st.number_input("Count", min_value=1, max_value=2000,
                                   value=int(preset["x0_count"]), step=1)

        st.subheader("Solver")
        tol = st.number_input("Tolerance", min_value=1e-14, value=1e-4, format="%.1e")
        max_iter = st.number_input("Max iterations", min_value=1, value=200, step=1)
        backend = st.selectbox("Backend", [b.value for b in Backend])
        delta = None
        if backend == Backend.FD.value:
            delta = st.number_input("Delta (0 = default)", min_value=0.0, value=0.0, format="%.1e") or None

        if any(Method(m) in EXTREMUM_METHODS for m in methods):
            step_a = st.number_input("L-G step size a", min_value=1e-6, value=0.05, format="%.4f")
            direction = st.selectbox("L-G direction", [d.value for d in Direction])
        else:
            step_a, direction = 0.05, Direction.MINIMIZE.value

        run_clicked = st.button("Run sweep", type="primary")

    if run_clicked:
        if not methods:
            st.warning("Please select at least one method.")
            return
        try:
            spec = SweepSpec.build(
                function=function_text,
                methods=[Method(m) for m in methods],
                x0_start=x0_start,
                x0_end=x0_end,
                x0_count=int(x0_count),
                config=SolverConfig.build(
                    tol=tol, max_iter=int(max_iter), step_a=step_a,
                    backend=backend, delta=delta, direction=direction,
                ),
            )
            with st.spinner("Running sweep..."):
                st.session_state.records = run_sweep(spec)
                st.session_state.stats = summarize(st.session_state.records)
                st.session_state.spec = spec
        except GendrvError as e:
            st.error(f"Invalid input: {e}")
            return
        except Exception as e:
            st.error(f"Sweep failed: {str(e)}")
            with st.expander("Error Details"):
                st.code(traceback.format_exc())
            return

    if st.session_state.records is None:
        st.info("Configure a sweep in the sidebar and press **Run sweep**")
        return

    display_results(st.session_state.spec, st.session_state.records, st.session_state.stats)


def display_results(spec, records, stats):
    """Display summary statistics, basin structure and per-run records"""
    st.subheader("Summary")

    total = len(records)
    converged = sum(s.n_converged for s in stats)
    col1, col2, col3 = st.columns(3)
    with col1:
        st.metric("Runs", total)
    with col2:
        st.metric("Converged", converged)
    with col3:
        st.metric("Convergence Rate", f"{(converged / total * 100) if total else 0:.1f}%")

    st.dataframe(stats_frame(stats), use_container_width=True)

    for baseline, candidate in [(Method.LNR, Method.CNR), (Method.LG, Method.QG)]:
        if baseline in spec.methods and candidate in spec.methods:
            comparison = compare_methods(stats, baseline, candidate)
            if comparison["mean_ratio"] is not None:
                st.write(f"**{baseline.label}** needed **{comparison['mean_ratio']:.2f}x** "
                         f"the mean iterations of **{candidate.label}**")

    extremum_stats = [s for s in stats if s.method in EXTREMUM_METHODS and s.distinct_limits]
    if extremum_stats:
        st.subheader("Extrema reached")
        f = resolve(spec.function)
        rows = []
        for s in extremum_stats:
            for centre, count, kind in classify_limits(s, f):
                rows.append({"Method": s.method.label, "x*": centre, "Runs": count, "Type": kind.value})
        st.dataframe(pd.DataFrame(rows), use_container_width=True)

    st.subheader("Export Results")
    exporter = DataExporter()
    col1, col2 = st.columns(2)
    with col1:
        st.download_button(
            label="Download CSV",
            data=exporter.to_csv_text(records),
            file_name="sweep_records.csv",
            mime="text/csv"
        )
    with col2:
        st.download_button(
            label="Download JSON",
            data=exporter.to_json_text(records, stats, spec.echo()),
            file_name="sweep_results.json",
            mime="application/json"
        )

    with st.expander("Per-run records"):
        st.dataframe(records_frame(records), use_container_width=True)


if __name__ == "__main__":
    main()
