using Xunit;

namespace Fixtures.Malformed;

public class ParserTests
{
    [Fact]
    public void ReadsHeader()
    {
        var header = Parser.ReadHeader(input);
        Assert.Equal(expectedName, header.Name);
        Assert.Equal(expectedVersion, header.Version);
    }
}
