using Xunit;

namespace Fixtures.Roulette;

public class CsvRowTests
{
    [Fact]
    public void ParsesEveryField()
    {
        var parser = new CsvParser();
        var input = "a,b,c";
        var expectedWidth = 3;
        var row = parser.ParseLine(input);
        Assert.NotNull(row);
        Assert.Equal(expectedWidth, row.Length);
        Assert.Contains("b", row);
    }
}

public class CsvSingleCheckTests
{
    [Fact]
    public void ParsesSingleField()
    {
        var parser = new CsvParser();
        var row = parser.ParseLine("a");
        Assert.Single(row);
    }
}
