//! Nested sublevel pictures as PPM and SVG.
use inner_sublevel::inner::InnerSpec;
use inner_sublevel::sublevel::{render, write_image, ImageFormat, ImageSpec};

fn main() -> inner_sublevel::Result<()> {
    let dir = std::env::temp_dir().join("inner-sublevel-render");
    let sq = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
    let etas = [(-2.0f64).exp(), 0.3, (-1.0f64).exp(), 0.5, 0.8];
    for format in [ImageFormat::Ppm, ImageFormat::Svg] {
        let spec = ImageSpec {
            width: 256,
            height: 256,
            format,
            ..ImageSpec::default()
        };
        let bytes = render(&sq, &etas, &spec)?;
        let path = dir.join(match format {
            ImageFormat::Ppm => "atomic_squared.ppm",
            ImageFormat::Svg => "atomic_squared.svg",
        });
        write_image(&path, &bytes)?;
        println!("wrote {} ({} bytes)", path.display(), bytes.len());
    }
    Ok(())
}
