use stable_ergo_core::expr::parse_sigma;

const CORPUS: [&str; 50] = [
    "1",
    "x",
    "2.5",
    "1e-3",
    "-x",
    "x^2",
    "(1+abs(x))^2",
    "(1+abs(x))^1.5",
    "(1+abs(x))^0.7",
    "1+x^2",
    "(1+x^2)^0.75",
    "exp(abs(x))",
    "exp(-x^2)+1",
    "log(2+abs(x))",
    "(1+abs(x))*log(2+abs(x))",
    "min(1,abs(x))",
    "max(1,abs(x))^2",
    "max(1,min(x,3))",
    "abs(x)^2+1",
    "2*x+3",
    "2*(x+3)",
    "x-1-2",
    "x-(1-2)",
    "x/2/3",
    "x/(2/3)",
    "2^3^2",
    "(2^3)^2",
    "-x^2",
    "(-x)^2",
    "--x",
    "1-(-2)",
    "x*(-1)",
    "3*abs(x)^1.25+0.5",
    "(1+abs(x))^2*(2+abs(x))^-1",
    "1/(1+abs(x))+abs(x)",
    "exp(log(1+abs(x))*2)",
    "max(abs(x),1)^1.1",
    "min(max(abs(x),1),100)^2",
    "(abs(x)+1)^(1+1)",
    "x^(1/2)",
    "((x))",
    "abs(abs(x))",
    "log(exp(x))",
    "0.5*(1+abs(x))^3",
    "(1+abs(x-1))^2",
    "(1+abs(x+2))^1.5*(1+abs(x-2))^0.5",
    "1e2*x",
    "x*x*x",
    "x+x*x-x/x",
    "max(exp(-abs(x)),1)",
];

#[test]
fn print_then_parse_is_the_identity_on_the_corpus() {
    for text in CORPUS {
        let e = parse_sigma(text).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        let again = parse_sigma(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again, e, "{text} printed as {printed}");
        assert_eq!(again.to_string(), printed);
        for x in [-3.0, -0.5, 0.25, 2.0] {
            let (a, b) = (e.eval(x), again.eval(x));
            match (a, b) {
                (Ok(a), Ok(b)) => assert!(a == b || (a.is_nan() && b.is_nan()), "{text} at {x}"),
                (Err(_), Err(_)) => {}
                other => panic!("{text} at {x}: {other:?}"),
            }
        }
    }
}
