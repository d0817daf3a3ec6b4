//! Figure presets shipped with the binary.

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        /// `(name, TOML text)` for every bundled preset.
        pub const PRESETS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../../presets/", $name, ".toml")))),*
        ];
    };
}

presets!(
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7-left",
    "fig7-right",
    "fig8-left",
    "fig8-right",
    "fig9",
    "fig10",
    "fig11",
    "fig12",
);

pub fn find(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}
